#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "semideg/chart.hpp"
#include "semideg/polynomial.hpp"

namespace semideg {

/// Canonical quotient num/den over Q[coordinates, atoms, parameters] modulo
/// the atom relations r^2 = p(coords).
///
/// Canonical form: every atom appears with degree <= 1 in num; den is free of
/// atoms (conjugates are multiplied through), has leading coefficient 1, and
/// shares no polynomial factor with the coefficients of num. Two values are
/// equal iff their (num, den) pairs are equal, and zero iff num is zero.
class RationalFunction {
 public:
  /// Zero. A default value has no chart; it adopts the chart of the first
  /// operand it is combined with.
  RationalFunction() = default;
  RationalFunction(ChartPtr chart, const Rational& constant);
  RationalFunction(ChartPtr chart, Polynomial num, Polynomial den = Polynomial(1));

  static RationalFunction variable(ChartPtr chart, std::size_t var);

  const ChartPtr& chart() const { return chart_; }
  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Rational constant_value() const;
  bool is_polynomial() const { return den_.is_constant(); }
  bool has_atoms() const;
  bool has_parameters() const;
  /// Term count of numerator plus denominator.
  std::size_t size() const { return num_.size() + den_.size(); }

  RationalFunction operator-() const;
  RationalFunction& operator+=(const RationalFunction& other);
  RationalFunction& operator-=(const RationalFunction& other);
  RationalFunction& operator*=(const RationalFunction& other);
  RationalFunction& operator/=(const RationalFunction& other);
  RationalFunction& operator*=(const Rational& scalar);
  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
  friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
  friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
  friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
  friend RationalFunction operator*(RationalFunction a, const Rational& s) { return a *= s; }
  friend RationalFunction operator*(const Rational& s, RationalFunction a) { return a *= s; }
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  RationalFunction inverse() const;
  RationalFunction pow(int exponent) const;

  /// Partial derivative along a coordinate; atoms follow dr/dx = p_,x / (2 r).
  RationalFunction diff(std::size_t coordinate) const;
  /// Derivative treating chart variable `var` as independent (used for parameters).
  RationalFunction partial(std::size_t var) const;

  /// Moves the value onto a chart that extends this one (see Chart::embeds_into).
  RationalFunction rebind(ChartPtr chart) const;

  /// Exact value when no atom is involved. Throws SingularPoint on a pole.
  Rational eval_exact(std::span<const Rational> coordinates, std::span<const Rational> parameters = {}) const;
  /// Floating value; atoms use the positive root. Throws SingularPoint.
  double eval(std::span<const double> coordinates, std::span<const double> parameters = {}) const;

  std::string to_string() const;

 private:
  void canonicalize();
  void adopt_chart(const RationalFunction& other);

  ChartPtr chart_;
  Polynomial num_;
  Polynomial den_ = Polynomial(1);
};

/// Replaces r^2 by the atom's radicand until every atom has degree <= 1.
Polynomial reduce_atoms(const Polynomial& p, const Chart& chart);

std::string polynomial_to_string(const Polynomial& p, const Chart& chart);

/// Values of the chart variables at a point, atoms filled in as positive roots.
std::vector<double> variable_values(const Chart& chart, std::span<const double> coordinates,
                                    std::span<const double> parameters);

}  // namespace semideg
