#pragma once

#include <string_view>

#include "semideg/chart.hpp"
#include "semideg/expr.hpp"

namespace semideg {

/// Parses infix text over the chart's names. sqrt(p) of a coordinate
/// polynomial resolves to the atom with radicand p; without one it stays a
/// half power, which normalize() rejects.
Expr parse_expr(std::string_view text, const Chart& chart);

/// Like parse_expr, but sqrt(p) of an undeclared coordinate polynomial
/// declares a new atom sqrt_<k> on `chart`.
Expr parse_expr_declaring(std::string_view text, Chart& chart);

}  // namespace semideg
