// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "reference_data.hpp"
#include "semideg/killing.hpp"

using namespace semideg;
using namespace semideg::testing;

namespace {

struct Failed {
  std::string why;
};

void require(bool ok, const std::string& why) {
  if (!ok) throw Failed{why};
}

Tensor zero_D(const ChartPtr& c) { return Tensor(c, {Variance::Lower, Variance::Lower, Variance::Upper}); }

RationalFunction random_entry(std::mt19937& rng, const ChartPtr& chart) {
  std::uniform_int_distribution<int> c(-5, 5), d(1, 4);
  RationalFunction v(chart, Rational(c(rng), d(rng)));
  for (std::size_t k = 0; k < chart->dim(); ++k) v += RationalFunction::variable(chart, k) * Rational(c(rng), d(rng));
  return v;
}

Tensor random_lower3(std::mt19937& rng, const ChartPtr& chart) {
  Tensor t = Tensor::all_lower(chart, 3);
  for (std::size_t i = 0; i < t.size(); ++i) t.component(i) = random_entry(rng, chart);
  return t;
}

KillingCandidate coordinate_square(const ChartPtr& c, std::size_t i, std::size_t j) {
  Tensor K = Tensor::all_lower(c, 2);
  K.at({i, j}) = K.at({j, i}) = RationalFunction(c, Rational(1));
  return KillingCandidate(K);
}

KillingCandidate rotation_square(const ChartPtr& c, std::size_t a, std::size_t b) {
  Tensor w = Tensor::all_lower(c, 1);
  w.at({b}) = RationalFunction::variable(c, a);
  w.at({a}) = -RationalFunction::variable(c, b);
  return KillingCandidate(outer(w, w));
}

std::vector<double> jet(const RationalFunction& V, const Metric& metric, const std::vector<double>& p) {
  std::vector<double> y{V.eval(p)};
  Tensor grad = Tensor::all_lower(V.chart(), 1);
  for (std::size_t k = 0; k < metric.dim(); ++k) {
    grad.at({k}) = V.diff(k);
    y.push_back(grad.at({k}).eval(p));
  }
  y.push_back(trace(cov_derivative(grad, metric), 0, 1, metric).at({}).eval(p));
  return y;
}

const std::vector<double> kUnit{1, 1, 1};

std::string criterion1() {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  PotentialFamily fam = family(e, {"1", "1/x^2", "1/y^2", "1/z^2"});
  Tensor D = extract_D(fam);
  require(D == generic_D(c), "D differs from -3/x dx^3 - 3/y dy^3 - 3/z dz^3");
  require(build_T(D, e).T == generic_T(c), "T differs from the 9-term reference");
  StructureReport r = decompose_D(D, e);
  require(r.s == one_form(c, {"-3/x", "-3/y", "-3/z"}), "s differs");
  require(find_exactness_witness(r.s, parse_expr("-3*ln(x*y*z)", *c)), "s != d(-3 ln(xyz))");
  return "D, T, s and f = -3 ln(xyz) exact";
}

std::string criterion2() {
  auto c = xyz_r_chart();
  Metric e = Metric::euclidean(c);
  PotentialFamily fam = family(e, {"1", "1/x^2", "1/y^2", "1/r"});
  Tensor D = extract_D(fam);
  require(D == kepler_D(c), "D differs from the reference");
  require(hook_project_21(lower_all(D, e), e) == kepler_N(c), "N differs from the reference");
  StructureReport r = decompose_D(D, e);
  require(r.s == one_form(c, {"-3/x", "-3/y", "6/z"}), "s differs");
  require(check_closed(r.s), "s not closed");
  require(find_exactness_witness(r.s, parse_expr("3*ln(z^2/(x*y))", *c)), "s != d(3 ln(z^2/(xy)))");
  require(r.verdict == Verdict::NonExtendable, "verdict is not NonExtendable");
  return "D, N, s, f = 3 ln(z^2/(xy)) exact; non-extendable";
}

std::string criterion3() {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  PotentialFamily fam = family(e, {"1", "x", "y", "z"});
  Tensor D = extract_D(fam);
  require(D.is_zero(), "D is not zero");
  require(decompose_D(D, e).verdict == Verdict::Extendable, "verdict is not Extendable");
  NonDegStructure nd = build_T(D, e);
  require(nd.T.is_zero(), "T is not zero");
  Prolongation p(nd, e);
  BasisSolution b = integrate_basis(p, kUnit, Grid{{3, 3, 3}, 0.25, kUnit}.points());
  require(b.state_size() == 5, "solution space is not 5-dimensional");
  ExtensionResult x = extension_direction(b, fam, {parse_expr("x^2 + y^2 + z^2", *c)});
  require(x.fit_status == FitStatus::Fitted, "fit failed: " + x.fit_message);
  require(x.fit_expression == "x^2 + y^2 + z^2", "fit is " + x.fit_expression);
  require(x.fit_residual < 1e-9, "fit residual " + std::to_string(x.fit_residual));
  std::ostringstream note;
  note << "fit x^2 + y^2 + z^2, residual " << x.fit_residual;
  return note.str();
}

std::string criterion4() {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  StructureReport r = analyze_structure(family(e, {"1", "1/x^2", "1/y^2", "1/z^2"}));
  NonDegStructure nd = build_T(r.D, e);
  std::vector<CheckOutcome> all = check_nondeg_conditions(nd, e);
  for (const auto& o : r.residuals) all.push_back(o);
  all.push_back(CheckOutcome::of("s-integrability", s_integrability_residual(nd, e)));
  all.push_back(CheckOutcome::of("d2s-restriction", d2s_residual(nd, r.s, e)));
  std::size_t count = 0;
  for (const auto& o : all) {
    require(o.is_zero(), o.name + " nonzero: " + o.detail);
    ++count;
  }
  for (const char* name : {"star-1", "star-2", "star-3", "star-4", "t-closed", "q-symmetric", "t-decomposition",
                           "ds-formula", "v-prolong", "s-integrability"}) {
    bool found = false;
    for (const auto& o : all) found = found || o.name == name;
    require(found, std::string("missing check ") + name);
  }
  return std::to_string(count) + " residuals exactly zero";
}

std::string criterion5() {
  std::mt19937 rng(5);
  auto c3 = xyz_chart();
  Metric e3 = Metric::euclidean(c3);
  for (int trial = 0; trial < 20; ++trial) {
    Tensor p = hook_project_21(random_lower3(rng, c3), e3);
    require(hook_project_21(p, e3) == p, "not idempotent");
    require(trace(p, 0, 1, e3).is_zero() && trace(p, 0, 2, e3).is_zero() && trace(p, 1, 2, e3).is_zero(),
            "not trace-free");
    Tensor sym = symmetrize(random_lower3(rng, c3), {0, 1, 2});
    require(hook_project_21(sym, e3).is_zero(), "symmetric input not killed");
  }
  auto c2 = make_chart({"x", "y"});
  Metric e2 = Metric::euclidean(c2);
  for (int trial = 0; trial < 50; ++trial)
    require(hook_project_21(random_lower3(rng, c2), e2).is_zero(), "nonzero in two dimensions");
  return "idempotent, trace-free, kills symmetric; 50/50 zero in 2D";
}

std::string criterion6() {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  Prolongation p(build_T(generic_D(c), e), e);
  BasisSolution b = integrate_basis(p, kUnit, Grid{{3, 3, 3}, 0.25, kUnit}.points());
  require(b.path_disagreement < 1e-8, "path disagreement " + std::to_string(b.path_disagreement));
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> u(-2, 2);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    std::ostringstream text;
    text.precision(17);
    text << "(" << u(rng) << ")*(x^2 + y^2 + z^2) + (" << u(rng) << ")/x^2 + (" << u(rng) << ")/y^2 + (" << u(rng)
         << ")/z^2 + (" << u(rng) << ")";
    RationalFunction V = value(text.str(), c);
    const std::vector<double> init = jet(V, e, kUnit);
    for (std::size_t i = 0; i < b.targets.size(); ++i) {
      const std::vector<double> exact = jet(V, e, b.targets[i]), y = b.state(i, init);
      for (std::size_t r = 0; r < exact.size(); ++r)
        worst = std::max(worst, std::fabs(y[r] - exact[r]) / std::max(1.0, std::fabs(exact[r])));
    }
  }
  require(worst < 1e-7, "max relative error " + std::to_string(worst));
  std::ostringstream note;
  note << "max relative error " << worst << ", path disagreement " << b.path_disagreement;
  return note.str();
}

std::string criterion7() {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  std::vector<KillingCandidate> squares;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i; j < 3; ++j) squares.push_back(coordinate_square(c, i, j));
  for (const auto& K : squares) {
    require(is_killing(K, e).is_zero(), "dx^i dx^j not Killing");
    for (const char* v : {"1", "x", "y", "z", "x^2 + y^2 + z^2"})
      require(bertrand_darboux(K, value(v, c), e).is_zero(), std::string("BD nonzero for V = ") + v);
  }
  const NonDegStructure nd = build_T(generic_D(c), e);
  const KillingCandidate Lz = rotation_square(c, 0, 1);
  require(is_killing(Lz, e).is_zero(), "rotation square not Killing");
  require(killing_prolongation_residual(Lz, nd, e).is_zero(), "Killing prolongation residual nonzero");
  ConservationReport h =
      check_conservation(coordinate_square(c, 0, 0), value("x^2 + y^2 + z^2", c), e, std::vector<double>{1, 0.5, -0.3},
                         std::vector<double>{0.2, 0.7, -0.4}, 1e-3, 10000);
  require(h.H_drift < 1e-6 && h.F_drift < 1e-6, "conservation drift H " + std::to_string(h.H_drift) + ", F " +
                                                    std::to_string(h.F_drift));
  std::ostringstream note;
  note << "exact checks zero; drift H " << h.H_drift << ", F " << h.F_drift << " over " << h.steps << " steps";
  return note.str();
}

std::string criterion8() {
  auto c = xyz_chart();
  Metric e = Metric::euclidean(c);
  require(torsion_view(decompose_D(zero_D(c), e), e).vectorial_residual.is_zero(), "oscillator residual nonzero");
  require(torsion_view(decompose_D(generic_D(c), e), e).vectorial_residual.is_zero(), "generic residual nonzero");
  auto cr = xyz_r_chart();
  Metric er = Metric::euclidean(cr);
  require(!torsion_view(decompose_D(kepler_D(cr), er), er).vectorial_residual.is_zero(), "Kepler residual zero");
  std::mt19937 rng(8);
  int agree = 0;
  for (int trial = 0; trial < 10; ++trial) {
    StructureReport injected = decompose_D(random_D(c, rng), e);
    StructureReport projected = decompose_D(raise(injected.D_lower - injected.N, 2, e), e);
    require(!injected.N.is_zero() && projected.N.is_zero(), "random sample did not split as intended");
    for (const StructureReport* r : {&injected, &projected}) {
      require(torsion_view(*r, e).vectorial_residual.is_zero() == r->N.is_zero(), "residual and N disagree");
      ++agree;
    }
  }
  return "fixtures as expected; " + std::to_string(agree) + "/20 random tensors agree";
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<std::string()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "generic system exact fixture", 10, criterion1},
      {2, "Kepler-Coulomb exact fixture", 60, criterion2},
      {3, "oscillator round trip", 5, criterion3},
      {4, "non-degenerate condition suite", 120, criterion4},
      {5, "hook projector properties", 1e9, criterion5},
      {6, "prolongation numerics", 30, criterion6},
      {7, "Killing suite", 1e9, criterion7},
      {8, "torsion equivalence", 1e9, criterion8},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string note;
    bool ok = true;
    try {
      note = c.run();
    } catch (const Failed& f) {
      ok = false;
      note = f.why;
    } catch (const std::exception& e) {
      ok = false;
      note = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && seconds > c.budget_seconds) {
      ok = false;
      note += "; over the time budget";
    }
    failures += ok ? 0 : 1;
    std::printf("%s %d %s (%.2f s): %s\n", ok ? "PASS" : "FAIL", c.id, c.title, seconds, note.c_str());
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
