#include "semideg/cli/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "semideg/errors.hpp"
#include "semideg/parser.hpp"

namespace semideg::cli {

namespace {

constexpr double kNumericBdTolerance = 1e-6;
const char* const kNotExtendable = "N nonzero: no non-degenerate extension";

const std::vector<std::string> kStructureChecks{"v-prolong", "decomposition", "d-closed",
                                                "ts-closed", "ds-formula",    "ds-trace"};
const std::vector<std::string> kNondegChecks{"star-1",   "star-2",   "star-3",          "star-4",         "t-decomposition",
                                             "t-closed", "q-symmetric", "d2s-restriction", "s-integrability"};

void note_failures(AnalysisReport& r) {
  for (const auto& row : r.checks)
    if (row.guaranteed && row.outcome.status == CheckStatus::Nonzero)
      r.failures.push_back(row.outcome.name + ": " + row.outcome.detail);
}

std::vector<CheckRow> torsion_rows(const StructureReport& s, const Metric& metric, AnalysisReport& r) {
  const TorsionView v = torsion_view(s, metric);
  CheckOutcome vectorial = CheckOutcome::of("torsion", v.vectorial_residual);
  if (vectorial.is_zero() != s.N.is_zero())
    r.failures.push_back("torsion: vectorial residual and N disagree on vanishing");
  return {{vectorial, false}, {CheckOutcome::of("torsion-parts", v.torsion - torsion_from_parts(s, metric)), true}};
}

std::vector<CheckRow> nondeg_rows(const NonDegStructure& nd, const StructureReport& s, const Metric& metric) {
  std::vector<CheckRow> rows;
  for (auto& o : check_nondeg_conditions(nd, metric)) rows.push_back({std::move(o), true});
  rows.push_back({CheckOutcome::of("d2s-restriction", d2s_residual(nd, s.s, metric)), true});
  rows.push_back({CheckOutcome::of("s-integrability", s_integrability_residual(nd, metric)), true});
  return rows;
}

CheckOutcome family_bd(const KillingCandidate& K, const PotentialFamily& family, const Metric& metric) {
  for (std::size_t k = 0; k < family.values().size(); ++k) {
    CheckOutcome o = CheckOutcome::of("bertrand-darboux", bertrand_darboux(K, family.values()[k], metric));
    if (!o.is_zero()) {
      o.detail = "V" + std::to_string(k) + " " + o.detail;
      return o;
    }
  }
  return CheckOutcome{"bertrand-darboux", CheckStatus::ExactZero, {}};
}

KillingRow killing_row(const KillingCandidate& K, const System& system, const NonDegStructure* nd) {
  KillingRow row{K.label, {}, std::nullopt};
  row.checks.push_back(CheckOutcome::of("is-killing", is_killing(K, system.metric)));
  row.checks.push_back(family_bd(K, system.family, system.metric));
  row.checks.push_back(nd ? CheckOutcome::of("killing-prolongation", killing_prolongation_residual(K, *nd, system.metric))
                          : CheckOutcome::skipped("killing-prolongation", kNotExtendable));
  return row;
}

int exit_code_for(const AnalysisReport& r, bool extendable) {
  if (!r.failures.empty()) return kExitInternal;
  return extendable ? kExitExtendable : kExitNonExtendable;
}

}  // namespace

Settings resolve_settings(const System& system, const Overrides& o) {
  const std::size_t n = system.chart->dim();
  const AnalysisSpec& a = system.description.analysis;
  Settings s;
  s.base = o.base ? *o.base : a.base ? *a.base : std::vector<double>(n, 1.0);
  s.grid = o.grid ? *o.grid : a.grid ? *a.grid : std::vector<std::size_t>(n, 3);
  s.spacing = a.spacing.value_or(0.25);
  s.tolerance = o.tolerance ? *o.tolerance : a.tolerance.value_or(1e-8);
  if (s.base.size() != n) throw InputError("--base needs " + std::to_string(n) + " coordinates");
  if (s.grid.size() != n) throw InputError("--grid needs " + std::to_string(n) + " counts");
  if (!(s.tolerance > 0)) throw InputError("--tol must be positive");
  return s;
}

std::string verdict_sentence(const StructureReport& s) {
  if (s.verdict == Verdict::Extendable) return "N vanishes: extendable";
  return "N nonzero: non-extendable (witness N" + describe_component(s.N, *s.N.first_nonzero()) + ")";
}

AnalysisReport analyze(const System& system, const Overrides& overrides) {
  const Metric& metric = system.metric;
  AnalysisReport r;
  r.name = system.description.name;
  r.input_text = to_text(system.description);
  r.settings = resolve_settings(system, overrides);
  r.potentials = system.description.potentials;
  std::vector<Expr> dictionary = system.dictionary;
  r.dictionary = system.description.analysis.dictionary;
  if (overrides.dictionary) {
    r.dictionary = *overrides.dictionary;
    dictionary.clear();
    for (const auto& f : r.dictionary) dictionary.push_back(parse_expr(f, *system.chart));
  }

  r.structure = analyze_structure(system.family);
  for (const auto& o : r.structure.residuals) r.checks.push_back({o, true});
  for (auto& row : torsion_rows(r.structure, metric, r)) r.checks.push_back(std::move(row));

  const bool extendable = r.structure.verdict == Verdict::Extendable;
  std::optional<NonDegStructure> nd;
  if (extendable) {
    nd = build_T(r.structure.D, metric);
    r.T = nd->T;
    for (auto& row : nondeg_rows(*nd, r.structure, metric)) r.checks.push_back(std::move(row));
  } else {
    for (const auto& name : kNondegChecks) r.checks.push_back({CheckOutcome::skipped(name, kNotExtendable), true});
  }
  note_failures(r);

  for (const auto& K : system.killing) {
    KillingRow row = killing_row(K, system, nd ? &*nd : nullptr);
    for (const auto& o : row.checks)
      if (o.status == CheckStatus::Nonzero) r.failures.push_back(o.name + " for " + K.label + ": " + o.detail);
    r.killing.push_back(std::move(row));
  }

  if (nd) {
    const Prolongation p(*nd, metric);
    const Grid grid{r.settings.grid, r.settings.spacing, r.settings.base};
    try {
      BasisSolution basis = integrate_basis(p, r.settings.base, grid.points(), r.settings.tolerance);
      ExtensionSummary summary{basis.path_disagreement, extension_direction(basis, system.family, dictionary)};
      r.extension = std::move(summary);
      for (std::size_t k = 0; k < system.killing.size(); ++k) {
        const NumericBertrandDarboux bd(system.killing[k], *nd, metric);
        double worst = 0.0;
        for (std::size_t t = 0; t < basis.targets.size(); ++t)
          for (std::size_t u = 0; u < basis.state_size(); ++u) {
            std::vector<double> init(basis.state_size(), 0.0);
            init[u] = 1.0;
            worst = std::max(worst, bd.max_residual(basis.targets[t], basis.state(t, init)));
          }
        r.killing[k].numeric_bd = worst;
        if (!(worst < kNumericBdTolerance))
          r.failures.push_back("numeric-bd for " + system.killing[k].label + ": " + std::to_string(worst));
      }
    } catch (const SingularPath& e) {
      throw InputError(std::string("extension: ") + e.what() + "; choose another base point or grid");
    } catch (const PathDependence& e) {
      r.failures.push_back(std::string("path-independence: ") + e.what());
    } catch (const FamilyNotContained& e) {
      r.failures.push_back(std::string("family-contained: ") + e.what());
    }
  }
  r.exit_code = exit_code_for(r, extendable);
  return r;
}

const std::vector<std::string>& check_registry() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v = kStructureChecks;
    v.push_back("star-conditions");
    v.insert(v.end(), kNondegChecks.begin(), kNondegChecks.end());
    for (const char* s : {"torsion", "is-killing", "bertrand-darboux", "killing-prolongation"}) v.emplace_back(s);
    return v;
  }();
  return names;
}

AnalysisReport run_check(const System& system, const std::string& name) {
  const auto& reg = check_registry();
  if (std::find(reg.begin(), reg.end(), name) == reg.end()) {
    std::string list;
    for (const auto& n : reg) list += (list.empty() ? "" : ", ") + n;
    throw UnknownCheck("unknown check '" + name + "'; known checks: " + list);
  }
  const Metric& metric = system.metric;
  AnalysisReport r;
  r.fragment = true;
  r.name = system.description.name;
  r.input_text = to_text(system.description);
  r.potentials = system.description.potentials;
  r.structure = analyze_structure(system.family);
  const bool extendable = r.structure.verdict == Verdict::Extendable;

  auto wanted = [&](const std::string& check) {
    if (check == name) return true;
    return name == "star-conditions" && check.rfind("star-", 0) == 0;
  };
  for (const auto& o : r.structure.residuals)
    if (wanted(o.name)) r.checks.push_back({o, true});
  if (name == "torsion")
    for (auto& row : torsion_rows(r.structure, metric, r)) r.checks.push_back(std::move(row));

  std::optional<NonDegStructure> nd;
  if (extendable) nd = build_T(r.structure.D, metric);
  const bool nondeg = std::any_of(kNondegChecks.begin(), kNondegChecks.end(), wanted);
  if (nondeg) {
    if (nd) {
      for (auto& row : nondeg_rows(*nd, r.structure, metric))
        if (wanted(row.outcome.name)) r.checks.push_back(std::move(row));
    } else {
      for (const auto& c : kNondegChecks)
        if (wanted(c)) r.checks.push_back({CheckOutcome::skipped(c, kNotExtendable), true});
    }
  }
  if (name == "is-killing" || name == "bertrand-darboux" || name == "killing-prolongation") {
    for (const auto& K : system.killing) {
      KillingRow row = killing_row(K, system, nd ? &*nd : nullptr);
      for (auto& o : row.checks)
        if (o.name == name) {
          o.name += ":" + K.label;
          r.checks.push_back({o, true});
        }
    }
    if (system.killing.empty()) r.checks.push_back({CheckOutcome::skipped(name, "no [killing] blocks"), true});
  }
  note_failures(r);

  bool clean = true;
  for (const auto& row : r.checks) clean = clean && row.outcome.is_zero();
  if (!r.failures.empty()) r.exit_code = kExitInternal;
  else r.exit_code = clean || extendable ? kExitExtendable : kExitNonExtendable;
  return r;
}

}  // namespace semideg::cli
