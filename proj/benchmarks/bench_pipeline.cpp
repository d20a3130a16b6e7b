#include <benchmark/benchmark.h>

#include "semideg/killing.hpp"
#include "semideg/parser.hpp"

using namespace semideg;

namespace {

ChartPtr kepler_chart() {
  Chart c({"x", "y", "z"});
  c.add_atom("r", Polynomial::variable(0).pow(2) + Polynomial::variable(1).pow(2) + Polynomial::variable(2).pow(2));
  return std::make_shared<const Chart>(c);
}

PotentialFamily family(const ChartPtr& chart, const std::vector<std::string>& texts) {
  std::vector<Expr> basis;
  for (const auto& t : texts) basis.push_back(parse_expr(t, *chart));
  return PotentialFamily(Metric::euclidean(chart), basis);
}

const std::vector<std::string> kGeneric{"1", "1/x^2", "1/y^2", "1/z^2"};

void BM_ExtractGeneric(benchmark::State& state) {
  auto fam = family(make_chart({"x", "y", "z"}), kGeneric);
  for (auto _ : state) benchmark::DoNotOptimize(extract_D(fam));
}
BENCHMARK(BM_ExtractGeneric)->Unit(benchmark::kMillisecond);

void BM_AnalyzeKepler(benchmark::State& state) {
  auto fam = family(kepler_chart(), {"1", "1/x^2", "1/y^2", "1/r"});
  for (auto _ : state) benchmark::DoNotOptimize(analyze_structure(fam));
}
BENCHMARK(BM_AnalyzeKepler)->Unit(benchmark::kMillisecond);

void BM_NondegConditions(benchmark::State& state) {
  auto fam = family(make_chart({"x", "y", "z"}), kGeneric);
  const NonDegStructure nd = build_T(extract_D(fam), fam.metric());
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_nondeg_conditions(nd, fam.metric()));
    benchmark::DoNotOptimize(s_integrability_residual(nd, fam.metric()));
  }
}
BENCHMARK(BM_NondegConditions)->Unit(benchmark::kMillisecond);

// Basis integration over a cubic grid with state.range(0) points per axis.
void BM_IntegrateBasis(benchmark::State& state) {
  auto fam = family(make_chart({"x", "y", "z"}), kGeneric);
  const Prolongation p(build_T(extract_D(fam), fam.metric()), fam.metric());
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> base{1, 1, 1};
  const auto points = Grid{{n, n, n}, 0.25, base}.points();
  for (auto _ : state) benchmark::DoNotOptimize(integrate_basis(p, base, points));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(points.size()));
}
BENCHMARK(BM_IntegrateBasis)->Arg(2)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Conservation(benchmark::State& state) {
  auto chart = make_chart({"x", "y", "z"});
  Metric e = Metric::euclidean(chart);
  Tensor K = Tensor::all_lower(chart, 2);
  K.at({0, 0}) = RationalFunction(chart, Rational(1));
  const KillingCandidate kc(K);
  const RationalFunction V = normalize(parse_expr("x^2 + y^2 + z^2", *chart), chart);
  const std::vector<double> x0{1, 0.5, -0.3}, p0{0.2, 0.7, -0.4};
  for (auto _ : state)
    benchmark::DoNotOptimize(check_conservation(kc, V, e, x0, p0, 1e-3, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Conservation)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
