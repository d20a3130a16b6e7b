#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semideg/killing.hpp"

namespace semideg::cli {

/// One `name[a,b] = expr` line of a metric or Killing block.
struct MatrixEntry {
  std::size_t line = 0;
  std::string row, col;
  std::string text;
};

struct AtomSpec {
  std::string name;
  std::string radicand;
};

struct KillingSpec {
  std::string name;
  std::vector<MatrixEntry> entries;
};

struct AnalysisSpec {
  std::optional<std::vector<double>> base;
  std::optional<std::vector<std::size_t>> grid;
  std::optional<double> spacing;
  std::optional<double> tolerance;
  std::vector<std::string> dictionary;
};

/// Text form of a system, before any expression is parsed.
struct SystemDescription {
  std::string name;
  std::vector<std::string> coordinates;
  std::vector<AtomSpec> atoms;
  bool has_metric = false;
  std::vector<MatrixEntry> metric;
  std::vector<std::string> potentials;
  std::vector<KillingSpec> killing;
  AnalysisSpec analysis;
};

/// Throws InputError with the offending line number.
SystemDescription parse_description(std::string_view text, std::string name = "system");

/// Canonical text; parse_description(to_text(d)) reproduces d up to line numbers.
std::string to_text(const SystemDescription& d);

/// Expressions parsed against the chart the description declares.
struct System {
  SystemDescription description;
  ChartPtr chart;
  Metric metric;
  PotentialFamily family;
  std::vector<KillingCandidate> killing;
  std::vector<Expr> dictionary;
};

/// Throws InputError, and the parser's SyntaxError / UnknownSymbol /
/// NonRationalExpression / InvalidFamily / DegenerateMetric.
System build_system(const SystemDescription& d);

/// Reads `# comment` lines and one expression per other line.
std::vector<std::string> parse_dictionary(std::string_view text);

std::vector<double> parse_point(std::string_view text);
/// "3x3x3" -> {3, 3, 3}.
std::vector<std::size_t> parse_grid(std::string_view text);

}  // namespace semideg::cli
