#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "semideg/chart.hpp"
#include "semideg/polynomial.hpp"
#include "semideg/rational_function.hpp"

namespace semideg {

enum class ExprKind { Constant, Symbol, Sum, Product, Power, Log };

/// Immutable expression DAG. Symbols refer to chart variables by kind and
/// local index, so an Expr survives atoms being declared after it was built.
class Expr {
 public:
  Expr();  // zero

  static Expr constant(const Rational& q);
  static Expr symbol(VarKind kind, std::size_t local);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(const Expr& base, const Rational& exponent);
  static Expr log(const Expr& arg);
  static Expr from_polynomial(const Polynomial& p, const Chart& chart);

  ExprKind kind() const { return node_->kind; }
  /// Constant value, or the exponent of a Power.
  const Rational& value() const { return node_->value; }
  VarKind var_kind() const { return node_->var_kind; }
  std::size_t local() const { return node_->local; }
  std::span<const Expr> args() const { return node_->args; }

  bool is_constant() const { return kind() == ExprKind::Constant; }
  bool is_zero_literal() const { return is_constant() && value() == 0; }
  bool contains_log() const;

  friend Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
  friend Expr operator/(const Expr& a, const Expr& b) { return product({a, power(b, -1)}); }
  Expr operator-() const;

 private:
  struct Node {
    ExprKind kind = ExprKind::Constant;
    Rational value;
    VarKind var_kind = VarKind::Coordinate;
    std::size_t local = 0;
    std::vector<Expr> args;
  };
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Exact partial derivative along coordinate `coordinate`.
Expr diff(const Expr& e, std::size_t coordinate, const Chart& chart);

/// Canonical rational form. Half-integer powers are accepted only of an atom's
/// radicand. Throws NonRationalExpression for ln or other fractional powers.
RationalFunction normalize(const Expr& e, const ChartPtr& chart);

bool is_zero(const Expr& e, const ChartPtr& chart);

struct Value {
  bool exact = false;
  Rational q;
  double d = 0.0;
};

/// Exact when e is free of ln and radicals, floating otherwise.
/// Throws SingularPoint on a pole, a non-positive radicand or a ln of a non-positive value.
Value eval(const Expr& e, const ChartPtr& chart, std::span<const Rational> coordinates,
           std::span<const Rational> parameters = {});
double eval(const Expr& e, const Chart& chart, std::span<const double> coordinates,
            std::span<const double> parameters = {});

/// Text in the parser grammar.
std::string to_string(const Expr& e, const Chart& chart);

/// Polynomial in the coordinates (and parameters) when e normalizes to one; throws otherwise.
Polynomial to_polynomial(const Expr& e, const ChartPtr& chart);

}  // namespace semideg
