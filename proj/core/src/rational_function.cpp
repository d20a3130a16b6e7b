#include "semideg/rational_function.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "semideg/errors.hpp"

namespace semideg {

Polynomial reduce_atoms(const Polynomial& p, const Chart& chart) {
  const std::size_t first = chart.dim();
  const std::size_t last = chart.dim() + chart.num_atoms();
  bool needed = false;
  for (const auto& t : p.terms())
    for (std::size_t v = first; v < last && !needed; ++v) needed = t.monomial[v] >= 2;
  if (!needed) return p;

  std::vector<Term> plain;
  Polynomial expanded;
  for (const auto& t : p.terms()) {
    Monomial m = t.monomial;
    Polynomial factor(1);
    bool reduced = false;
    for (std::size_t v = first; v < last; ++v) {
      unsigned e = m[v];
      if (e < 2) continue;
      m.set(v, e % 2);
      factor *= chart.atom(v - first).radicand.pow(e / 2);
      reduced = true;
    }
    if (reduced) {
      expanded += factor.shifted(m) * t.coeff;
    } else {
      plain.push_back({m, t.coeff});
    }
  }
  return Polynomial::from_terms(std::move(plain)) + expanded;
}

RationalFunction::RationalFunction(ChartPtr chart, const Rational& constant)
    : chart_(std::move(chart)), num_(constant) {}

RationalFunction::RationalFunction(ChartPtr chart, Polynomial num, Polynomial den)
    : chart_(std::move(chart)), num_(std::move(num)), den_(std::move(den)) {
  canonicalize();
}

RationalFunction RationalFunction::variable(ChartPtr chart, std::size_t var) {
  return RationalFunction(std::move(chart), Polynomial::variable(var));
}

Rational RationalFunction::constant_value() const {
  if (!is_constant()) throw std::logic_error("rational function is not constant");
  return num_.constant_value();
}

bool RationalFunction::has_atoms() const {
  if (!chart_) return false;
  for (std::size_t a = 0; a < chart_->num_atoms(); ++a)
    if (num_.depends_on(chart_->atom_var(a))) return true;
  return false;
}

bool RationalFunction::has_parameters() const {
  if (!chart_) return false;
  for (std::size_t p = 0; p < chart_->num_parameters(); ++p) {
    std::size_t v = chart_->parameter_var(p);
    if (num_.depends_on(v) || den_.depends_on(v)) return true;
  }
  return false;
}

namespace {

// Numerator coefficients grouped by their atom monomial.
std::vector<Polynomial> atom_coefficients(const Polynomial& num, const Chart* chart) {
  if (chart == nullptr || chart->num_atoms() == 0) return {num};
  const std::size_t first = chart->dim();
  const std::size_t last = first + chart->num_atoms();
  std::map<Monomial, std::vector<Term>> groups;
  for (const auto& t : num.terms()) {
    Monomial key;
    Monomial rest = t.monomial;
    for (std::size_t v = first; v < last; ++v) {
      key.set(v, t.monomial[v]);
      rest.set(v, 0);
    }
    groups[key].push_back({rest, t.coeff});
  }
  std::vector<Polynomial> out;
  out.reserve(groups.size());
  for (auto& [key, terms] : groups) out.push_back(Polynomial::from_terms(std::move(terms)));
  return out;
}

}  // namespace

void RationalFunction::canonicalize() {
  const Chart* chart = chart_.get();
  if (chart != nullptr && chart->num_atoms() > 0) {
    num_ = reduce_atoms(num_, *chart);
    den_ = reduce_atoms(den_, *chart);
  }
  if (den_.is_zero()) throw DivisionByZero("division by zero");
  if (num_.is_zero()) {
    den_ = Polynomial(1);
    return;
  }
  if (chart != nullptr) {
    for (std::size_t a = 0; a < chart->num_atoms(); ++a) {
      const std::size_t var = chart->atom_var(a);
      while (den_.depends_on(var)) {
        auto parts = den_.coefficients_in(var);
        const Polynomial& lower = parts[0];
        const Polynomial& upper = parts[1];
        Polynomial conjugate = lower - upper * Polynomial::variable(var);
        num_ = reduce_atoms(num_ * conjugate, *chart);
        den_ = reduce_atoms(lower * lower - upper * upper * chart->atom(a).radicand, *chart);
        if (den_.is_zero())
          throw DivisionByZero("denominator vanishes modulo the radical relation of '" + chart->atom(a).name + "'");
      }
    }
  }
  if (den_.is_constant()) {
    num_ *= Rational(1 / den_.constant_value());
    den_ = Polynomial(1);
    return;
  }
  Polynomial g = den_;
  for (const auto& c : atom_coefficients(num_, chart)) {
    g = gcd(g, c);
    if (g.is_constant()) break;
  }
  if (!g.is_constant()) {
    num_ = divide_exact(num_, g);
    den_ = divide_exact(den_, g);
  }
  if (den_.leading_coefficient() != 1) {
    Rational inv = 1 / den_.leading_coefficient();
    num_ *= inv;
    den_ *= inv;
  }
}

void RationalFunction::adopt_chart(const RationalFunction& other) {
  if (!chart_) {
    chart_ = other.chart_;
  } else if (other.chart_ && other.chart_ != chart_ && !other.chart_->embeds_into(*chart_)) {
    if (chart_->embeds_into(*other.chart_)) {
      chart_ = other.chart_;
    } else {
      throw std::logic_error("rational functions live on different charts");
    }
  }
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& other) {
  adopt_chart(other);
  if (other.is_zero()) return *this;
  if (is_zero()) {
    num_ = other.num_;
    den_ = other.den_;
    return *this;
  }
  if (den_ == other.den_) {
    num_ += other.num_;
  } else if (den_.is_constant()) {
    num_ = num_ * other.den_ + other.num_;
    den_ = other.den_;
  } else if (other.den_.is_constant()) {
    num_ += other.num_ * den_;
  } else {
    Polynomial g = gcd(den_, other.den_);
    Polynomial mine = divide_exact(den_, g);
    Polynomial theirs = divide_exact(other.den_, g);
    num_ = num_ * theirs + other.num_ * mine;
    den_ = mine * other.den_;
  }
  canonicalize();
  return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& other) { return *this += -other; }

RationalFunction& RationalFunction::operator*=(const RationalFunction& other) {
  adopt_chart(other);
  if (is_zero()) return *this;
  if (other.is_zero()) {
    *this = RationalFunction(chart_, Rational(0));
    return *this;
  }
  num_ *= other.num_;
  den_ *= other.den_;
  canonicalize();
  return *this;
}

RationalFunction& RationalFunction::operator*=(const Rational& scalar) {
  if (scalar == 0) {
    num_ = Polynomial{};
    den_ = Polynomial(1);
  } else {
    num_ *= scalar;
  }
  return *this;
}

RationalFunction RationalFunction::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero");
  return RationalFunction(chart_, den_, num_);
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& other) { return *this *= other.inverse(); }

RationalFunction RationalFunction::pow(int exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  RationalFunction result(chart_, Rational(1));
  RationalFunction base = *this;
  unsigned e = static_cast<unsigned>(exponent);
  while (e > 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e > 0) base *= base;
  }
  return result;
}

RationalFunction RationalFunction::diff(std::size_t coordinate) const {
  if (!chart_ || is_constant()) return RationalFunction(chart_, Rational(0));
  if (coordinate >= chart_->dim()) throw std::out_of_range("diff: not a coordinate");
  Polynomial dden = den_.derivative(coordinate);
  RationalFunction result(chart_, num_.derivative(coordinate) * den_ - num_ * dden, den_ * den_);
  for (std::size_t a = 0; a < chart_->num_atoms(); ++a) {
    const std::size_t var = chart_->atom_var(a);
    if (!num_.depends_on(var)) continue;
    const Polynomial& radicand = chart_->atom(a).radicand;
    Polynomial dp = radicand.derivative(coordinate);
    if (dp.is_zero()) continue;
    // d r / dx = p_,x r / (2 p)
    result += RationalFunction(chart_, num_.derivative(var) * dp * Polynomial::variable(var),
                               Rational(2) * radicand * den_);
  }
  return result;
}

RationalFunction RationalFunction::partial(std::size_t var) const {
  if (!chart_ || is_constant()) return RationalFunction(chart_, Rational(0));
  return RationalFunction(chart_, num_.derivative(var) * den_ - num_ * den_.derivative(var), den_ * den_);
}

RationalFunction RationalFunction::rebind(ChartPtr chart) const {
  if (chart_ && !chart_->embeds_into(*chart)) throw std::logic_error("rebind: chart does not extend the original");
  RationalFunction r = *this;
  r.chart_ = std::move(chart);
  return r;
}

Rational RationalFunction::eval_exact(std::span<const Rational> coordinates,
                                      std::span<const Rational> parameters) const {
  if (has_atoms()) throw Error("exact evaluation of an expression with radical atoms");
  std::vector<Rational> values(kMaxVariables, Rational(0));
  for (std::size_t i = 0; i < coordinates.size(); ++i) values[i] = coordinates[i];
  if (chart_)
    for (std::size_t p = 0; p < parameters.size(); ++p) values[chart_->parameter_var(p)] = parameters[p];
  Rational den = den_.eval(values);
  if (den == 0) throw SingularPoint("pole at evaluation point");
  Rational v = num_.eval(values) / den;
  v.canonicalize();
  return v;
}

std::vector<double> variable_values(const Chart& chart, std::span<const double> coordinates,
                                    std::span<const double> parameters) {
  std::vector<double> values(kMaxVariables, 0.0);
  for (std::size_t i = 0; i < coordinates.size() && i < chart.dim(); ++i) values[i] = coordinates[i];
  for (std::size_t a = 0; a < chart.num_atoms(); ++a) {
    double p = chart.atom(a).radicand.eval(values);
    if (!(p > 0.0)) throw SingularPoint("radicand of '" + chart.atom(a).name + "' is not positive");
    values[chart.atom_var(a)] = std::sqrt(p);
  }
  for (std::size_t p = 0; p < parameters.size() && p < chart.num_parameters(); ++p)
    values[chart.parameter_var(p)] = parameters[p];
  return values;
}

double RationalFunction::eval(std::span<const double> coordinates, std::span<const double> parameters) const {
  if (!chart_) return num_.is_zero() ? 0.0 : num_.constant_value().get_d();
  std::vector<double> values = variable_values(*chart_, coordinates, parameters);
  double den = den_.eval(values);
  if (den == 0.0) throw SingularPoint("pole at evaluation point");
  return num_.eval(values) / den;
}

std::string polynomial_to_string(const Polynomial& p, const Chart& chart) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    Rational c = t.coeff;
    const bool negative = c < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (std::size_t v = 0; v < kMaxVariables; ++v) {
      unsigned e = t.monomial[v];
      if (e == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += chart.name(v);
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty()) {
      out += to_string(c);
    } else if (c == 1) {
      out += mono;
    } else {
      out += to_string(c) + "*" + mono;
    }
  }
  return out;
}

std::string RationalFunction::to_string() const {
  if (!chart_) return num_.is_zero() ? "0" : semideg::to_string(num_.constant_value());
  std::string num = polynomial_to_string(num_, *chart_);
  if (den_.is_constant()) return num;
  if (num_.size() > 1) num = "(" + num + ")";
  std::string den = polynomial_to_string(den_, *chart_);
  const bool bare = den_.is_monomial() && den_.leading_coefficient() == 1 && den.find('*') == std::string::npos;
  if (!bare) den = "(" + den + ")";
  return num + "/" + den;
}

}  // namespace semideg
