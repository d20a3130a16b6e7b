#include <cmath>

#include <gtest/gtest.h>

#include "reference_data.hpp"
#include "semideg/errors.hpp"
#include "semideg/killing.hpp"

using namespace semideg;
using namespace semideg::testing;

namespace {

KillingCandidate matrix(const ChartPtr& c, const std::vector<std::vector<std::string>>& rows, std::string label = {}) {
  Tensor K = Tensor::all_lower(c, 2);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) K.at({i, j}) = value(rows[i][j], c);
  return KillingCandidate(K, std::move(label));
}

// dx^i (.) dx^j with unit off-diagonal entries.
KillingCandidate coordinate_square(const ChartPtr& c, std::size_t i, std::size_t j) {
  Tensor K = Tensor::all_lower(c, 2);
  K.at({i, j}) = RationalFunction(c, Rational(1));
  K.at({j, i}) = RationalFunction(c, Rational(1));
  return KillingCandidate(K);
}

// Square of the rotation generator in the (a, b) plane: (x_a dx_b - x_b dx_a)^2.
KillingCandidate rotation_square(const ChartPtr& c, std::size_t a, std::size_t b) {
  Tensor w = Tensor::all_lower(c, 1);
  w.at({b}) = RationalFunction::variable(c, a);
  w.at({a}) = -RationalFunction::variable(c, b);
  return KillingCandidate(outer(w, w));
}

std::vector<KillingCandidate> generic_killing(const ChartPtr& c) {
  std::vector<KillingCandidate> out;
  for (std::size_t i = 0; i < 3; ++i) out.push_back(coordinate_square(c, i, i));
  out.push_back(rotation_square(c, 0, 1));
  out.push_back(rotation_square(c, 1, 2));
  out.push_back(rotation_square(c, 0, 2));
  return out;
}

const std::vector<std::string> kGeneric{"1", "1/x^2", "1/y^2", "1/z^2"};

}  // namespace

TEST(Killing, CandidateMustBeSymmetric) {
  auto c = xyz_chart();
  EXPECT_THROW(matrix(c, {{"0", "x", "0"}, {"0", "0", "0"}, {"0", "0", "0"}}), InputError);
  EXPECT_THROW(KillingCandidate(Tensor(c, {Variance::Upper, Variance::Lower})), InputError);
}

TEST(Killing, CoordinateSquares) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i; j < 3; ++j) EXPECT_TRUE(is_killing(coordinate_square(c, i, j), e).is_zero());
}

TEST(Killing, RotationSquare) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  KillingCandidate K = matrix(c, {{"y^2", "-x*y", "0"}, {"-x*y", "x^2", "0"}, {"0", "0", "0"}});
  EXPECT_TRUE(K.K == rotation_square(c, 0, 1).K);
  EXPECT_TRUE(is_killing(K, e).is_zero());
}

TEST(Killing, NonKillingProbe) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  Tensor r = is_killing(matrix(c, {{"x", "0", "0"}, {"0", "0", "0"}, {"0", "0", "0"}}), e);
  // (x dx dx)_(ij,k): only the xxx slot survives, with value 1.
  EXPECT_TRUE(r.at({0, 0, 0}) == value("1", c));
  EXPECT_TRUE(r.at({0, 0, 1}).is_zero());
}

TEST(Killing, CurvedSphere) {
  Metric s = sphere();
  auto c = s.chart();
  EXPECT_TRUE(is_killing(KillingCandidate(s.g()), s).is_zero());
  // Rotations about the pole are isometries of the stereographic metric.
  Tensor xi = Tensor::all_lower(c, 1);
  const RationalFunction lambda = value("4/(1 + x^2 + y^2)^2", c);
  xi.at({0}) = -RationalFunction::variable(c, 1) * lambda;
  xi.at({1}) = RationalFunction::variable(c, 0) * lambda;
  EXPECT_TRUE(is_killing(KillingCandidate(outer(xi, xi)), s).is_zero());
  // The flat rotation square is not Killing here.
  EXPECT_FALSE(is_killing(rotation_square(c, 0, 1), s).is_zero());
}

TEST(BertrandDarboux, OscillatorExamples) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i; j < 3; ++j) {
      for (const auto* v : {"1", "x", "y", "z", "x^2 + y^2 + z^2"})
        EXPECT_TRUE(bertrand_darboux(coordinate_square(c, i, j), value(v, c), e).is_zero()) << v;
    }
}

TEST(BertrandDarboux, Probe) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  // omega = (0, -2/x^3, 0), so d omega [x][y] = -6/x^4.
  Tensor r = bertrand_darboux(coordinate_square(c, 0, 1), value("1/x^2", c), e);
  EXPECT_TRUE(r.at({0, 1}) == value("-6/x^4", c));
  EXPECT_TRUE(r.at({1, 0}) == value("6/x^4", c));
  EXPECT_TRUE(r.at({0, 2}).is_zero());
}

TEST(BertrandDarboux, ConstantPotential) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  EXPECT_TRUE(bertrand_darboux(matrix(c, {{"x", "y", "0"}, {"y", "z^2", "1"}, {"0", "1", "x*y"}}),
                               parse_expr("7/3", *c), e)
                  .is_zero());
}

TEST(BertrandDarboux, GenericFamily) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  std::vector<std::string> potentials = kGeneric;
  potentials.push_back("x^2 + y^2 + z^2");
  for (const auto& K : generic_killing(c)) {
    EXPECT_TRUE(is_killing(K, e).is_zero());
    for (const auto& v : potentials) EXPECT_TRUE(bertrand_darboux(K, value(v, c), e).is_zero()) << v;
  }
  EXPECT_FALSE(bertrand_darboux(coordinate_square(c, 0, 1), value("1/x^2", c), e).is_zero());
}

TEST(ReconstructW, CoordinateSquare) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  WSamples w = reconstruct_W(coordinate_square(c, 0, 0), value("x^2 + y^2 + z^2", c), e, std::vector<double>{0, 0, 0},
                             {{1, 2, 3}, {-0.5, 4, 1}});
  EXPECT_NEAR(w.values[0], 1.0, 1e-12);
  EXPECT_NEAR(w.values[1], 0.25, 1e-12);
  EXPECT_LT(w.path_disagreement, 1e-8);
}

TEST(ReconstructW, MetricGivesPotential) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  RationalFunction V = value("1/x^2 + 2/y^2 - 1/z^2 + x*y", c);
  std::vector<double> base{1, 1, 1};
  std::vector<std::vector<double>> targets{{1.5, 0.7, 2}, {0.3, 0.3, 0.3}, {2, 1, 1}};
  WSamples w = reconstruct_W(KillingCandidate(e.g()), V, e, base, targets);
  for (std::size_t t = 0; t < targets.size(); ++t) EXPECT_NEAR(w.values[t], V.eval(targets[t]) - V.eval(base), 1e-9);
}

TEST(ReconstructW, ConstantPotential) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  WSamples w = reconstruct_W(rotation_square(c, 0, 1), value("5", c), e, std::vector<double>{1, 1, 1}, {{2, 3, 4}});
  EXPECT_EQ(w.values[0], 0.0);
}

TEST(ReconstructW, RotationSquareOnGenericPotential) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  // W = (x^2 + y^2) (1/x^2 + 1/y^2) for K = (x dy - y dx)^2, up to a constant.
  RationalFunction V = value("1/x^2 + 1/y^2", c);
  RationalFunction W = value("(x^2 + y^2)*(1/x^2 + 1/y^2)", c);
  std::vector<double> base{1, 1, 1}, target{1.7, 0.4, 2.2};
  WSamples w = reconstruct_W(rotation_square(c, 0, 1), V, e, base, {target});
  EXPECT_NEAR(w.values[0], W.eval(target) - W.eval(base), 1e-9);
}

TEST(ReconstructW, Errors) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  std::vector<double> base{1, 1, 1};
  EXPECT_THROW(reconstruct_W(coordinate_square(c, 0, 1), value("1/x^2", c), e, base, {{2, 2, 2}}), NotClosed);
  EXPECT_THROW(reconstruct_W(KillingCandidate(e.g()), value("1/x^2", c), e, base, {{-1, 1, 1}}), SingularPath);
}

TEST(KillingProlongation, FlatZeroT) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  NonDegStructure nd = build_T(Tensor(c, {Variance::Lower, Variance::Lower, Variance::Upper}), e);
  EXPECT_TRUE(killing_prolongation_residual(coordinate_square(c, 0, 1), nd, e).is_zero());
}

TEST(KillingProlongation, GenericSystem) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  NonDegStructure nd = build_T(generic_D(c), e);
  for (const auto& K : generic_killing(c)) EXPECT_TRUE(killing_prolongation_residual(K, nd, e).is_zero());
  EXPECT_FALSE(
      killing_prolongation_residual(matrix(c, {{"x", "0", "0"}, {"0", "0", "0"}, {"0", "0", "0"}}), nd, e).is_zero());
  // Killing but not compatible with the family.
  EXPECT_FALSE(killing_prolongation_residual(coordinate_square(c, 0, 1), nd, e).is_zero());
}

TEST(KillingProlongation, CompatibleImpliesProlongationOnSphere) {
  Metric s = sphere();
  auto c = s.chart();
  PotentialFamily fam = family(s, kSphereFamily);
  NonDegStructure nd = build_T(extract_D(fam), s);
  Tensor xi = Tensor::all_lower(c, 1);
  const RationalFunction lambda = value("4/(1 + x^2 + y^2)^2", c);
  xi.at({0}) = -RationalFunction::variable(c, 1) * lambda;
  xi.at({1}) = RationalFunction::variable(c, 0) * lambda;
  int compatible = 0;
  for (const auto& K : {KillingCandidate(s.g()), KillingCandidate(outer(xi, xi))}) {
    bool ok = is_killing(K, s).is_zero();
    for (const auto& v : fam.values()) ok = ok && bertrand_darboux(K, v, s).is_zero();
    if (!ok) continue;
    ++compatible;
    EXPECT_TRUE(killing_prolongation_residual(K, nd, s).is_zero());
  }
  EXPECT_GE(compatible, 1);
}

TEST(NumericBD, GenericSolutionsAreCompatible) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  NonDegStructure nd = build_T(generic_D(c), e);
  Prolongation p(nd, e);
  BasisSolution b = integrate_basis(p, std::vector<double>{1, 1, 1}, Grid{{3, 3, 3}, 0.25, {1, 1, 1}}.points());
  for (const auto& K : generic_killing(c)) {
    NumericBertrandDarboux bd(K, nd, e);
    for (std::size_t t = 0; t < b.targets.size(); ++t)
      for (std::size_t u = 0; u < 5; ++u) {
        std::vector<double> init(5, 0.0);
        init[u] = 1.0;
        EXPECT_LT(bd.max_residual(b.targets[t], b.state(t, init)), 1e-6);
      }
  }
  NumericBertrandDarboux probe(coordinate_square(c, 0, 1), nd, e);
  double worst = 0.0;
  for (std::size_t u = 0; u < 5; ++u) {
    std::vector<double> init(5, 0.0);
    init[u] = 1.0;
    worst = std::max(worst, probe.max_residual(b.targets[0], b.state(0, init)));
  }
  EXPECT_GT(worst, 1e-3);
}

TEST(Conservation, Oscillator) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  RationalFunction V = value("x^2 + y^2 + z^2", c);
  std::vector<double> x0{1, 0.5, -0.3}, p0{0.2, 0.7, -0.4};
  for (const auto& K : {coordinate_square(c, 0, 0), coordinate_square(c, 1, 2), rotation_square(c, 0, 1)}) {
    ConservationReport r = check_conservation(K, V, e, x0, p0);
    EXPECT_EQ(r.steps, 10000u);
    EXPECT_LT(r.H_drift, 1e-6);
    EXPECT_LT(r.F_drift, 1e-6);
  }
}

TEST(Conservation, GenericPotential) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  RationalFunction V = value("x^2 + y^2 + z^2 + 1/x^2 + 2/y^2 + 1/(2*z^2)", c);
  ConservationReport r =
      check_conservation(rotation_square(c, 1, 2), V, e, std::vector<double>{1, 1.2, 0.9}, std::vector<double>{0.1, -0.3, 0.2});
  EXPECT_LT(r.F_drift, 1e-6);
}

TEST(Conservation, CurvedMetricRejected) {
  Metric s = sphere();
  EXPECT_THROW(check_conservation(KillingCandidate(s.g()), value("1", s.chart()), s, std::vector<double>{0, 0},
                                  std::vector<double>{1, 0}),
               InputError);
}
