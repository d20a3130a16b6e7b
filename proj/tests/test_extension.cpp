#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "reference_data.hpp"
#include "semideg/errors.hpp"
#include "semideg/extension.hpp"

using namespace semideg;
using namespace semideg::testing;

namespace {

Tensor zero_D(const ChartPtr& c) { return Tensor(c, {Variance::Lower, Variance::Lower, Variance::Upper}); }

NonDegStructure generic_nd(const Metric& e) { return build_T(generic_D(e.chart()), e); }

bool all_zero(const std::vector<CheckOutcome>& outcomes) {
  bool ok = true;
  for (const auto& o : outcomes) {
    EXPECT_TRUE(o.is_zero()) << o.name << " " << o.detail;
    ok = ok && o.is_zero();
  }
  return ok;
}

// Exact jet (V, grad V, Lap V) of a potential at a point.
std::vector<double> jet(const RationalFunction& V, const Metric& metric, const std::vector<double>& p) {
  std::vector<double> y{V.eval(p)};
  for (std::size_t k = 0; k < metric.dim(); ++k) y.push_back(V.diff(k).eval(p));
  Tensor grad = Tensor::all_lower(V.chart(), 1);
  for (std::size_t k = 0; k < metric.dim(); ++k) grad.at({k}) = V.diff(k);
  y.push_back(trace(cov_derivative(grad, metric), 0, 1, metric).at({}).eval(p));
  return y;
}

std::vector<double> pt(double x, double y, double z) { return {x, y, z}; }

}  // namespace

TEST(BuildT, OscillatorIsZero) {
  auto c = xyz_chart();
  EXPECT_TRUE(build_T(zero_D(c), Metric::euclidean(c)).T.is_zero());
}

TEST(BuildT, GenericSystem) {
  auto c = xyz_chart();
  EXPECT_TRUE(generic_nd(Metric::euclidean(c)).T == generic_T(c));
}

TEST(BuildT, KeplerIsNotExtendable) {
  auto c = xyz_r_chart();
  EXPECT_THROW(build_T(kepler_D(c), Metric::euclidean(c)), NotExtendable);
}

TEST(BuildT, SymmetricTraceFreeAndTraceIdentity) {
  Metric s = sphere();
  std::vector<std::pair<Tensor, Metric>> cases{{generic_D(xyz_chart()), Metric::euclidean(xyz_chart())},
                                               {extract_D(family(s, kSphereFamily)), s}};
  for (const auto& [D, m] : cases) {
    NonDegStructure nd = build_T(D, m);
    EXPECT_TRUE((permute(nd.T, {1, 0, 2}) - nd.T).is_zero());
    EXPECT_TRUE(trace(nd.T, 0, 1, m).is_zero());
    StructureReport r = decompose_D(D, m);
    EXPECT_TRUE(nd.t == r.t);
  }
}

TEST(BuildT, SphereFamilyHasVanishingT) {
  Metric s = sphere();
  NonDegStructure nd = build_T(extract_D(family(s, kSphereFamily)), s);
  EXPECT_TRUE(nd.T.is_zero());
  // q = -Ric = -g on the unit sphere.
  EXPECT_TRUE(nd.q_low + s.g() == Tensor::all_lower(s.chart(), 2));
}

TEST(NondegConditions, FlatZero) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  EXPECT_TRUE(all_zero(check_nondeg_conditions(build_T(zero_D(c), e), e)));
}

TEST(NondegConditions, GenericSystem) {
  Metric e = Metric::euclidean(xyz_chart());
  auto outcomes = check_nondeg_conditions(generic_nd(e), e);
  EXPECT_EQ(outcomes.size(), 7u);
  EXPECT_TRUE(all_zero(outcomes));
}

TEST(NondegConditions, CurvedSphere) {
  Metric s = sphere();
  EXPECT_FALSE(s.riemann().is_zero());
  EXPECT_TRUE(all_zero(check_nondeg_conditions(build_T(extract_D(family(s, kSphereFamily)), s), s)));
}

TEST(NondegConditions, PerturbationIsDetected) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  Tensor T = generic_T(c);
  add(T, {"xxx"}, "1/10");
  int nonzero = 0;
  for (const auto& o : check_nondeg_conditions(nondeg_from_T(T, e), e)) nonzero += o.is_zero() ? 0 : 1;
  EXPECT_GE(nonzero, 1);
}

TEST(Restriction, GenericSSatisfiesEquation) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  NonDegStructure nd = generic_nd(e);
  Tensor s = one_form(c, {"-3/x", "-3/y", "-3/z"});
  EXPECT_TRUE(d2s_residual(nd, s, e).is_zero());
  // The Kepler-type s is not a restriction of [I].
  EXPECT_FALSE(d2s_residual(nd, one_form(c, {"-3/x", "-3/y", "6/z"}), e).is_zero());
}

TEST(Restriction, NumericMatchesSymbolic) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  NonDegStructure nd = generic_nd(e);
  Tensor s = one_form(c, {"-3/x", "-3/y", "-3/z"});
  Tensor F = restriction_rhs(nd, s, e);
  std::vector<double> p{1.3, 0.7, 2.1}, sv;
  for (std::size_t k = 0; k < 3; ++k) sv.push_back(s.at({k}).eval(p));
  std::vector<double> Fn = restriction_rhs(nd, sv, e, p);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(Fn[a * 3 + k], F.at({a, k}).eval(p), 1e-12);
}

TEST(Restriction, FlatZeroT) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  NonDegStructure nd = build_T(zero_D(c), e);
  std::vector<double> sv{1, 2, -1}, p{0.5, 0.5, 0.5};
  std::vector<double> F = restriction_rhs(nd, sv, e, p);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(F[a * 3 + k], -sv[k] * sv[a] / 3.0);
  // A constant s solves s_a,k = F_ak only when it vanishes.
  EXPECT_FALSE(d2s_residual(nd, one_form(c, {"1", "2", "-1"}), e).is_zero());
  EXPECT_TRUE(d2s_residual(nd, one_form(c, {"0", "0", "0"}), e).is_zero());
}

TEST(Restriction, IntegrabilityResidual) {
  Metric e = Metric::euclidean(xyz_chart());
  EXPECT_TRUE(s_integrability_residual(generic_nd(e), e).is_zero());
  Metric s = sphere();
  EXPECT_TRUE(s_integrability_residual(build_T(extract_D(family(s, kSphereFamily)), s), s).is_zero());
  Tensor T = generic_T(xyz_chart());
  add(T, {"xyz", "yxz"}, "x");
  EXPECT_FALSE(s_integrability_residual(nondeg_from_T(T, e), e).is_zero());
}

TEST(Torsion, Fixtures) {
  auto c = xyz_r_chart();
  Metric e = Metric::euclidean(c);
  TorsionView zero = torsion_view(decompose_D(zero_D(c), e), e);
  EXPECT_TRUE(zero.torsion.is_zero() && zero.vectorial_residual.is_zero());
  TorsionView gen = torsion_view(decompose_D(generic_D(c), e), e);
  EXPECT_TRUE(gen.torsion.is_zero() && gen.vectorial_residual.is_zero());
  StructureReport kr = decompose_D(kepler_D(c), e);
  TorsionView kep = torsion_view(kr, e);
  EXPECT_FALSE(kep.vectorial_residual.is_zero());
  EXPECT_TRUE(kep.vectorial_residual == raise(kr.N - permute(kr.N, {0, 2, 1}), 0, e));
  EXPECT_TRUE(kep.torsion == torsion_from_parts(kr, e));
}

TEST(Torsion, VectorialIffNVanishes) {
  std::mt19937 rng(31);
  std::vector<Metric> metrics{Metric::euclidean(xyz_chart()), conformal(xyz_chart(), "1 + x^2")};
  int cases = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const Metric& m = metrics[static_cast<std::size_t>(trial) % metrics.size()];
    Tensor injected = random_D(m.chart(), rng);
    StructureReport ri = decompose_D(injected, m);
    // Same D with the hook part projected out.
    Tensor projected = raise(ri.D_lower - ri.N, 2, m);
    StructureReport rp = decompose_D(projected, m);
    for (const StructureReport* r : {&ri, &rp}) {
      TorsionView v = torsion_view(*r, m);
      EXPECT_EQ(v.vectorial_residual.is_zero(), r->N.is_zero());
      EXPECT_TRUE(v.torsion == torsion_from_parts(*r, m));
      ++cases;
    }
    EXPECT_FALSE(ri.N.is_zero());
    EXPECT_TRUE(rp.N.is_zero());
  }
  EXPECT_EQ(cases, 20);
}

TEST(Prolongation, FlatZeroT) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  NonDegStructure nd = build_T(zero_D(c), e);
  ProlongationState st{{0.3, -1, 2}, 1.5, {0.2, -0.4, 0.7}, 3.0};
  auto rhs = prolong_rhs(st, nd, e);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_DOUBLE_EQ(rhs[k][0], st.grad[k]);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(rhs[k][1 + i], i == k ? st.lap / 3 : 0.0);
    EXPECT_DOUBLE_EQ(rhs[k][4], 0.0);
  }
}

TEST(Prolongation, GenericAtUnitPoint) {
  Metric e = Metric::euclidean(xyz_chart());
  ProlongationState st{{1, 1, 1}, 0.0, {1, 0, 0}, 0.0};
  auto rhs = prolong_rhs(st, generic_nd(e), e);
  EXPECT_DOUBLE_EQ(rhs[0][1], -2.0);
}

TEST(Prolongation, RhsIsLinear) {
  Metric e = Metric::euclidean(xyz_chart());
  Prolongation p(generic_nd(e), e);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.5, 2.0), v(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x{u(rng), u(rng), u(rng)}, a(5), b(5), ab(5);
    const double ca = v(rng), cb = v(rng);
    for (std::size_t i = 0; i < 5; ++i) {
      a[i] = v(rng), b[i] = v(rng);
      ab[i] = ca * a[i] + cb * b[i];
    }
    auto ra = p.rhs(x, a), rb = p.rhs(x, b), rab = p.rhs(x, ab);
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(rab[k][i], ca * ra[k][i] + cb * rb[k][i], 1e-12);
  }
}

TEST(IntegrateBasis, OscillatorQuadratic) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  Prolongation p(build_T(zero_D(c), e), e);
  std::vector<std::vector<double>> targets{pt(1, 2, 3), pt(-1, 0.5, 0.25), pt(0.1, -0.7, 1.9)};
  BasisSolution b = integrate_basis(p, pt(0, 0, 0), targets);
  std::vector<double> init{0, 0, 0, 0, 6};
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto& x = targets[i];
    std::vector<double> y = b.state(i, init);
    EXPECT_NEAR(y[0], x[0] * x[0] + x[1] * x[1] + x[2] * x[2], 1e-8);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(y[1 + k], 2 * x[k], 1e-8);
    EXPECT_NEAR(y[4], 6.0, 1e-8);
  }
  std::vector<double> zero(5, 0.0);
  for (double v : b.state(0, zero)) EXPECT_EQ(v, 0.0);
}

TEST(IntegrateBasis, GenericReproducesNonDegeneratePotential) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  Prolongation p(generic_nd(e), e);
  Grid grid{{3, 3, 3}, 0.25, {1, 1, 1}};
  BasisSolution b = integrate_basis(p, pt(1, 1, 1), grid.points());
  EXPECT_LT(b.path_disagreement, 1e-8);
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 5; ++trial) {
    std::ostringstream text;
    text.precision(17);
    text << "(" << u(rng) << ")*(x^2 + y^2 + z^2) + (" << u(rng) << ")/x^2 + (" << u(rng) << ")/y^2 + (" << u(rng)
         << ")/z^2 + (" << u(rng) << ")";
    RationalFunction V = value(text.str(), c);
    std::vector<double> init = jet(V, e, pt(1, 1, 1));
    for (std::size_t i = 0; i < b.targets.size(); ++i) {
      std::vector<double> exact = jet(V, e, b.targets[i]), y = b.state(i, init);
      for (std::size_t r = 0; r < exact.size(); ++r)
        EXPECT_LT(std::fabs(y[r] - exact[r]), 1e-7 * std::max(1.0, std::fabs(exact[r])));
    }
  }
}

TEST(IntegrateBasis, LinearInInitialData) {
  Metric e = Metric::euclidean(xyz_chart());
  Prolongation p(generic_nd(e), e);
  std::vector<double> a{1, -2, 0.5, 3, 1}, w{0, 1, 1, -1, 2}, sum(5);
  for (std::size_t i = 0; i < 5; ++i) sum[i] = a[i] + w[i];
  auto x = pt(1, 1, 1), y = pt(1.4, 0.8, 1.2);
  auto ya = p.integrate_state(x, y, a), yw = p.integrate_state(x, y, w), ys = p.integrate_state(x, y, sum);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(ys[i], ya[i] + yw[i], 1e-9);
}

TEST(IntegrateBasis, SingularPath) {
  Metric e = Metric::euclidean(xyz_chart());
  Prolongation p(generic_nd(e), e);
  EXPECT_THROW(integrate_basis(p, pt(1, 1, 1), {pt(-1, 1, 1)}), SingularPath);
}

TEST(IntegrateBasis, PathDependenceForNonIntegrableT) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  Tensor T = generic_T(c);
  add(T, {"xyz", "yxz"}, "x");
  Prolongation p(nondeg_from_T(T, e), e);
  EXPECT_THROW(integrate_basis(p, pt(1, 1, 1), {pt(1.5, 1.5, 1.5)}), PathDependence);
}

TEST(IntegrateBasis, CurvedSphere) {
  Metric s = sphere();
  PotentialFamily fam = family(s, kSphereFamily);
  Prolongation p(build_T(extract_D(fam), s), s);
  Grid grid{{3, 3}, 0.2, {0.5, 0.3}};
  BasisSolution b = integrate_basis(p, std::vector<double>{0.5, 0.3}, grid.points());
  ExtensionResult r = extension_direction(b, fam, {parse_expr("(x^2 + y^2 - 1)/(x^2 + y^2 + 1)", *s.chart())});
  EXPECT_LT(r.family_residual, 1e-9);
  EXPECT_EQ(r.fit_status, FitStatus::Fitted) << r.fit_message;
  EXPECT_LT(r.fit_residual, 1e-8);
}

TEST(Extension, OscillatorFitsQuadratic) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  PotentialFamily fam = family(e, {"1", "x", "y", "z"});
  Prolongation p(build_T(extract_D(fam), e), e);
  Grid grid{{3, 3, 3}, 0.25, {1, 1, 1}};
  BasisSolution b = integrate_basis(p, pt(1, 1, 1), grid.points());
  ExtensionResult r = extension_direction(b, fam, {parse_expr("x^2 + y^2 + z^2", *c)});
  EXPECT_EQ(r.fit_status, FitStatus::Fitted);
  EXPECT_LT(r.fit_residual, 1e-9);
  ASSERT_EQ(r.exact_coefficients.size(), 1u);
  EXPECT_EQ(r.exact_coefficients[0], 1);
  EXPECT_EQ(r.fit_expression, "x^2 + y^2 + z^2");
  EXPECT_EQ(r.samples.size(), 27u);
}

TEST(Extension, GenericRecoversQuadraticDirection) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  PotentialFamily fam = family(e, {"1", "1/x^2", "1/y^2", "1/z^2"});
  Prolongation p(build_T(extract_D(fam), e), e);
  Grid grid{{3, 3, 3}, 0.25, {1, 1, 1}};
  BasisSolution b = integrate_basis(p, pt(1, 1, 1), grid.points());
  ExtensionResult r = extension_direction(b, fam, {parse_expr("x^2 + y^2 + z^2", *c)});
  EXPECT_LT(r.family_residual, 1e-7);
  EXPECT_EQ(r.fit_status, FitStatus::Fitted);
  EXPECT_LT(r.fit_residual, 1e-7);
}

TEST(Extension, EmptyDictionaryStillSamples) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  PotentialFamily fam = family(e, {"1", "x", "y", "z"});
  Prolongation p(build_T(extract_D(fam), e), e);
  BasisSolution b = integrate_basis(p, pt(1, 1, 1), Grid{{2, 2, 2}, 0.5, {1, 1, 1}}.points());
  ExtensionResult r = extension_direction(b, fam, {});
  EXPECT_EQ(r.fit_status, FitStatus::FitFailed);
  EXPECT_EQ(r.samples.size(), 8u);
  EXPECT_EQ(r.direction.size(), 5u);
}

TEST(Extension, WrongFamilyNotContained) {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  Prolongation p(generic_nd(e), e);
  BasisSolution b = integrate_basis(p, pt(1, 1, 1), Grid{{3, 3, 3}, 0.25, {1, 1, 1}}.points());
  EXPECT_THROW(extension_direction(b, family(e, {"1", "x", "y", "z"}), {}), FamilyNotContained);
}

TEST(Extension, SampleTableFormat) {
  auto c = xyz_chart();
  std::string table = sample_table({pt(1, 1, 1)}, {{1.0 / 3.0, 0, 0, 0, 2}}, *c);
  EXPECT_EQ(table, "# x y z V V_x V_y V_z LapV\n1 1 1 0.33333333333333331 0 0 0 2\n");
}

TEST(Grid, PointsAreCentred) {
  auto pts = Grid{{3, 1}, 0.5, {1, 2}}.points();
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_DOUBLE_EQ(pts[0][0], 0.5);
  EXPECT_DOUBLE_EQ(pts[2][0], 1.5);
  EXPECT_DOUBLE_EQ(pts[1][1], 2.0);
}
