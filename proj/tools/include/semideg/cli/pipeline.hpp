#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semideg/cli/description.hpp"

namespace semideg::cli {

inline constexpr int kExitExtendable = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInternal = 2;
inline constexpr int kExitNonExtendable = 10;

/// Command-line overrides of the [analysis] block.
struct Overrides {
  std::optional<std::vector<double>> base;
  std::optional<std::vector<std::size_t>> grid;
  std::optional<double> tolerance;
  std::optional<std::vector<std::string>> dictionary;
};

struct Settings {
  std::vector<double> base;
  std::vector<std::size_t> grid;
  double spacing = 0.25;
  double tolerance = 1e-8;
};

Settings resolve_settings(const System& system, const Overrides& overrides);

/// A check result plus whether the theory requires it to vanish.
struct CheckRow {
  CheckOutcome outcome;
  bool guaranteed = true;
};

struct KillingRow {
  std::string name;
  std::vector<CheckOutcome> checks;  // is-killing, bertrand-darboux, killing-prolongation
  std::optional<double> numeric_bd;  // worst |d(K dV)| over sampled solutions
};

struct ExtensionSummary {
  double path_disagreement = 0.0;
  ExtensionResult result;
};

struct AnalysisReport {
  std::string name;
  std::string input_text;  // canonical echo
  Settings settings;
  std::vector<std::string> potentials;
  std::vector<std::string> dictionary;
  StructureReport structure;
  std::optional<Tensor> T;
  std::vector<CheckRow> checks;
  std::optional<ExtensionSummary> extension;
  std::vector<KillingRow> killing;
  std::vector<std::string> failures;  // guaranteed checks that did not hold
  int exit_code = kExitExtendable;
  bool fragment = false;  // produced by run_check: only the selected checks
};

/// Extract, decompose, decide, extend and verify. Throws InputError when the
/// grid or base point is unusable; residual failures land in `failures`.
AnalysisReport analyze(const System& system, const Overrides& overrides = {});

/// Names accepted by `check --only`.
const std::vector<std::string>& check_registry();

/// Runs one registry entry. Throws UnknownCheck.
AnalysisReport run_check(const System& system, const std::string& name);

/// "N vanishes: extendable" or "N nonzero: non-extendable (witness ...)".
std::string verdict_sentence(const StructureReport& structure);

std::string human_report(const AnalysisReport& report);
/// Deterministic JSON document.
std::string machine_report(const AnalysisReport& report);

}  // namespace semideg::cli
