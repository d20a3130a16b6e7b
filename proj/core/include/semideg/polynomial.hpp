#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace semideg {

using Rational = mpq_class;

/// Upper bound on coordinates + radical atoms + parameters in one chart.
inline constexpr std::size_t kMaxVariables = 12;

/// Exponent vector over the chart variables. Ordered graded-lexicographically,
/// with variable 0 the most significant in the lexicographic tie-break.
class Monomial {
 public:
  Monomial() = default;

  static Monomial variable(std::size_t var, unsigned exponent = 1);

  unsigned operator[](std::size_t var) const { return exp_[var]; }
  void set(std::size_t var, unsigned exponent);
  unsigned degree() const { return degree_; }
  bool is_one() const { return degree_ == 0; }

  bool divides(const Monomial& other) const;
  Monomial operator*(const Monomial& other) const;
  /// Requires divides(*this).
  Monomial operator/(const Monomial& other) const;
  /// Componentwise minimum.
  static Monomial gcd(const Monomial& a, const Monomial& b);

  friend bool operator==(const Monomial& a, const Monomial& b) = default;
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);

 private:
  std::array<std::uint16_t, kMaxVariables> exp_{};
  std::uint16_t degree_ = 0;
};

struct Term {
  Monomial monomial;
  Rational coeff;
};

/// Sparse multivariate polynomial with exact rational coefficients. Terms are
/// kept sorted in descending monomial order with no zero coefficients, so two
/// polynomials are equal iff their term lists are equal.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(const Rational& constant);
  explicit Polynomial(long constant) : Polynomial(Rational(constant)) {}

  static Polynomial variable(std::size_t var);
  static Polynomial monomial(const Monomial& m, const Rational& coeff);
  /// Sorts and merges arbitrary terms.
  static Polynomial from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one()); }
  bool is_monomial() const { return terms_.size() == 1; }
  Rational constant_value() const;

  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  const Term& leading_term() const { return terms_.front(); }
  const Rational& leading_coefficient() const { return terms_.front().coeff; }

  unsigned degree_in(std::size_t var) const;
  bool depends_on(std::size_t var) const { return degree_in(var) > 0; }
  unsigned total_degree() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(const Rational& scalar);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  friend bool operator==(const Polynomial& a, const Polynomial& b);

  Polynomial pow(unsigned exponent) const;
  Polynomial derivative(std::size_t var) const;
  /// Multiplies every term by `m`.
  Polynomial shifted(const Monomial& m) const;

  /// coefficients_in(v)[k] is the coefficient of v^k, a polynomial free of v.
  std::vector<Polynomial> coefficients_in(std::size_t var) const;
  /// Leading coefficient when read as a univariate polynomial in `var`.
  Polynomial leading_coefficient_in(std::size_t var) const;

  /// Scales so the leading coefficient is 1 (zero stays zero).
  Polynomial monic() const;
  /// Monomial gcd of all terms.
  Monomial monomial_content() const;

  double eval(std::span<const double> values) const;
  Rational eval(std::span<const Rational> values) const;

 private:
  std::vector<Term> terms_;
};

/// Exact division; throws std::logic_error when `b` does not divide `a`.
Polynomial divide_exact(const Polynomial& a, const Polynomial& b);

/// Monic gcd over Q. gcd(0, 0) = 0.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

/// Pseudo-remainder of `a` by `b` treated as univariate in `var`.
Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, std::size_t var);

std::string to_string(const Rational& q);

}  // namespace semideg
