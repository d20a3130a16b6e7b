#include "semideg/expr.hpp"

#include <cmath>
#include <utility>

#include "semideg/errors.hpp"

namespace semideg {

namespace {

bool is_integer(const Rational& q) { return q.get_den() == 1; }

Rational int_pow(const Rational& base, long e) {
  Rational result = 1;
  Rational b = e < 0 ? Rational(1 / base) : base;
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  while (k > 0) {
    if (k & 1UL) result *= b;
    k >>= 1UL;
    if (k > 0) b *= b;
  }
  return result;
}

// Exact square root of a nonnegative rational, if it has one.
bool rational_sqrt(const Rational& q, Rational& root) {
  if (q < 0) return false;
  mpz_class n = q.get_num(), d = q.get_den();
  mpz_class rn, rd;
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  root = Rational(rn, rd);
  root.canonicalize();
  return true;
}

}  // namespace

Expr::Expr() : node_(std::make_shared<const Node>()) {}

Expr Expr::constant(const Rational& q) {
  auto n = std::make_shared<Node>();
  n->value = q;
  n->value.canonicalize();
  return Expr(std::move(n));
}

Expr Expr::symbol(VarKind kind, std::size_t local) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Symbol;
  n->var_kind = kind;
  n->local = local;
  return Expr(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  Rational c = 0;
  for (auto& t : terms) {
    if (t.kind() == ExprKind::Sum) {
      for (const auto& u : t.args()) {
        if (u.is_constant()) c += u.value();
        else flat.push_back(u);
      }
    } else if (t.is_constant()) {
      c += t.value();
    } else {
      flat.push_back(std::move(t));
    }
  }
  if (c != 0) flat.push_back(constant(c));
  if (flat.empty()) return constant(0);
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Sum;
  n->args = std::move(flat);
  return Expr(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  Rational c = 1;
  for (auto& f : factors) {
    if (f.kind() == ExprKind::Product) {
      for (const auto& u : f.args()) {
        if (u.is_constant()) c *= u.value();
        else flat.push_back(u);
      }
    } else if (f.is_constant()) {
      c *= f.value();
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (c == 0) return constant(0);
  if (flat.empty()) return constant(c);
  if (c != 1) flat.insert(flat.begin(), constant(c));
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Product;
  n->args = std::move(flat);
  return Expr(std::move(n));
}

Expr Expr::power(const Expr& base, const Rational& exponent) {
  if (exponent == 0) return constant(1);
  if (exponent == 1) return base;
  if (base.is_constant()) {
    const Rational& b = base.value();
    if (b == 1) return base;
    if (b != 0 && is_integer(exponent) && abs(exponent) <= 64) return constant(int_pow(b, exponent.get_num().get_si()));
    if (b == 0 && exponent > 0) return constant(0);
    if (b > 0 && exponent.get_den() == 2) {
      Rational root;
      if (rational_sqrt(b, root)) return constant(int_pow(root, exponent.get_num().get_si()));
    }
  }
  if (base.kind() == ExprKind::Power && is_integer(exponent)) return power(base.args()[0], base.value() * exponent);
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Power;
  n->value = exponent;
  n->value.canonicalize();
  n->args = {base};
  return Expr(std::move(n));
}

Expr Expr::log(const Expr& arg) {
  if (arg.is_constant() && arg.value() == 1) return constant(0);
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Log;
  n->args = {arg};
  return Expr(std::move(n));
}

Expr Expr::from_polynomial(const Polynomial& p, const Chart& chart) {
  std::vector<Expr> terms;
  for (const auto& t : p.terms()) {
    std::vector<Expr> factors{constant(t.coeff)};
    for (std::size_t v = 0; v < chart.num_variables(); ++v)
      if (t.monomial[v] > 0) factors.push_back(power(symbol(chart.kind(v), chart.local_index(v)), t.monomial[v]));
    terms.push_back(product(std::move(factors)));
  }
  return sum(std::move(terms));
}

bool Expr::contains_log() const {
  if (kind() == ExprKind::Log) return true;
  for (const auto& a : args())
    if (a.contains_log()) return true;
  return false;
}

Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }

Expr Expr::operator-() const { return product({constant(-1), *this}); }

Expr diff(const Expr& e, std::size_t coordinate, const Chart& chart) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return Expr::constant(0);
    case ExprKind::Symbol:
      if (e.var_kind() == VarKind::Coordinate) return Expr::constant(e.local() == coordinate ? 1 : 0);
      if (e.var_kind() == VarKind::Atom) {
        Polynomial dp = chart.atom(e.local()).radicand.derivative(coordinate);
        if (dp.is_zero()) return Expr::constant(0);
        return Expr::product({Expr::constant(Rational(1, 2)), Expr::from_polynomial(dp, chart), Expr::power(e, -1)});
      }
      return Expr::constant(0);
    case ExprKind::Sum: {
      std::vector<Expr> terms;
      for (const auto& a : e.args()) terms.push_back(diff(a, coordinate, chart));
      return Expr::sum(std::move(terms));
    }
    case ExprKind::Product: {
      std::vector<Expr> terms;
      auto args = e.args();
      for (std::size_t i = 0; i < args.size(); ++i) {
        Expr d = diff(args[i], coordinate, chart);
        if (d.is_zero_literal()) continue;
        std::vector<Expr> factors(args.begin(), args.end());
        factors[i] = d;
        terms.push_back(Expr::product(std::move(factors)));
      }
      return Expr::sum(std::move(terms));
    }
    case ExprKind::Power: {
      const Expr& base = e.args()[0];
      Expr d = diff(base, coordinate, chart);
      if (d.is_zero_literal()) return Expr::constant(0);
      return Expr::product({Expr::constant(e.value()), Expr::power(base, e.value() - 1), d});
    }
    case ExprKind::Log: {
      const Expr& arg = e.args()[0];
      Expr d = diff(arg, coordinate, chart);
      if (d.is_zero_literal()) return Expr::constant(0);
      return d / arg;
    }
  }
  return Expr::constant(0);
}

RationalFunction normalize(const Expr& e, const ChartPtr& chart) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return RationalFunction(chart, e.value());
    case ExprKind::Symbol:
      return RationalFunction::variable(chart, chart->variable(e.var_kind(), e.local()));
    case ExprKind::Sum: {
      RationalFunction acc(chart, Rational(0));
      for (const auto& a : e.args()) acc += normalize(a, chart);
      return acc;
    }
    case ExprKind::Product: {
      RationalFunction acc(chart, Rational(1));
      for (const auto& a : e.args()) acc *= normalize(a, chart);
      return acc;
    }
    case ExprKind::Power: {
      const Rational& q = e.value();
      RationalFunction base = normalize(e.args()[0], chart);
      if (is_integer(q)) return base.pow(static_cast<int>(q.get_num().get_si()));
      if (q.get_den() == 2 && base.is_polynomial()) {
        // sqrt(c * p) with p an atom radicand and c a rational square
        for (std::size_t a = 0; a < chart->num_atoms(); ++a) {
          const Polynomial& p = chart->atom(a).radicand;
          if (base.num().is_zero() || p.leading_coefficient() == 0) continue;
          Rational scale = base.num().leading_coefficient() / p.leading_coefficient();
          Rational root;
          if (!(base.num() == p * scale) || !rational_sqrt(scale, root)) continue;
          RationalFunction atom = RationalFunction::variable(chart, chart->atom_var(a)) * root;
          return atom.pow(static_cast<int>(q.get_num().get_si()));
        }
      }
      throw NonRationalExpression("fractional power of '" + to_string(e.args()[0], *chart) +
                                  "' is not a declared radical");
    }
    case ExprKind::Log:
      throw NonRationalExpression("ln(" + to_string(e.args()[0], *chart) + ") is not rational");
  }
  return RationalFunction(chart, Rational(0));
}

bool is_zero(const Expr& e, const ChartPtr& chart) { return normalize(e, chart).is_zero(); }

double eval(const Expr& e, const Chart& chart, std::span<const double> coordinates,
            std::span<const double> parameters) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return e.value().get_d();
    case ExprKind::Symbol:
      switch (e.var_kind()) {
        case VarKind::Coordinate:
          return coordinates[e.local()];
        case VarKind::Atom: {
          std::vector<double> values(kMaxVariables, 0.0);
          for (std::size_t i = 0; i < coordinates.size() && i < chart.dim(); ++i) values[i] = coordinates[i];
          double p = chart.atom(e.local()).radicand.eval(values);
          if (!(p > 0.0)) throw SingularPoint("radicand of '" + chart.atom(e.local()).name + "' is not positive");
          return std::sqrt(p);
        }
        case VarKind::Parameter:
          if (e.local() >= parameters.size())
            throw InputError("no value for parameter '" + chart.parameters().at(e.local()) + "'");
          return parameters[e.local()];
      }
      return 0.0;
    case ExprKind::Sum: {
      double acc = 0.0;
      for (const auto& a : e.args()) acc += eval(a, chart, coordinates, parameters);
      return acc;
    }
    case ExprKind::Product: {
      double acc = 1.0;
      for (const auto& a : e.args()) acc *= eval(a, chart, coordinates, parameters);
      return acc;
    }
    case ExprKind::Power: {
      double b = eval(e.args()[0], chart, coordinates, parameters);
      const Rational& q = e.value();
      if (b == 0.0 && q < 0) throw SingularPoint("pole at evaluation point");
      if (!is_integer(q) && b < 0.0) throw SingularPoint("fractional power of a negative value");
      if (is_integer(q)) return std::pow(b, static_cast<double>(q.get_num().get_si()));
      return std::pow(b, q.get_d());
    }
    case ExprKind::Log: {
      double a = eval(e.args()[0], chart, coordinates, parameters);
      if (!(a > 0.0)) throw SingularPoint("ln of a non-positive value");
      return std::log(a);
    }
  }
  return 0.0;
}

Value eval(const Expr& e, const ChartPtr& chart, std::span<const Rational> coordinates,
           std::span<const Rational> parameters) {
  Value v;
  if (!e.contains_log()) {
    try {
      RationalFunction rf = normalize(e, chart);
      if (!rf.has_atoms()) {
        v.exact = true;
        v.q = rf.eval_exact(coordinates, parameters);
        v.d = v.q.get_d();
        return v;
      }
    } catch (const NonRationalExpression&) {
    }
  }
  std::vector<double> x, p;
  for (const auto& c : coordinates) x.push_back(c.get_d());
  for (const auto& c : parameters) p.push_back(c.get_d());
  v.d = eval(e, *chart, x, p);
  return v;
}

namespace {

// Precedence: 1 sum, 2 product, 3 power base, 4 primary.
std::string print(const Expr& e, const Chart& chart, int context);

std::string print_factor_list(const std::vector<Expr>& fs, const Chart& chart) {
  std::string out;
  for (const auto& f : fs) {
    if (!out.empty()) out += "*";
    out += print(f, chart, 2);
  }
  return out;
}

std::string print(const Expr& e, const Chart& chart, int context) {
  auto wrap = [&](std::string s, int own) { return own < context ? "(" + s + ")" : s; };
  switch (e.kind()) {
    case ExprKind::Constant: {
      const Rational& q = e.value();
      std::string s = to_string(q);
      int own = q < 0 ? 1 : (is_integer(q) ? 4 : 2);
      return wrap(s, own);
    }
    case ExprKind::Symbol:
      return chart.name(chart.variable(e.var_kind(), e.local()));
    case ExprKind::Sum: {
      std::string out;
      for (const auto& t : e.args()) {
        bool negative = false;
        Expr shown = t;
        if (t.is_constant() && t.value() < 0) {
          negative = true;
          shown = Expr::constant(-t.value());
        } else if (t.kind() == ExprKind::Product && t.args()[0].is_constant() && t.args()[0].value() < 0) {
          negative = true;
          shown = -t;
        }
        if (out.empty()) {
          out = negative ? "-" + print(shown, chart, 2) : print(shown, chart, 1);
        } else {
          out += negative ? " - " : " + ";
          out += print(shown, chart, 2);
        }
      }
      return wrap(out, 1);
    }
    case ExprKind::Product: {
      std::vector<Expr> top, bottom;
      Rational c = 1;
      for (const auto& f : e.args()) {
        if (f.is_constant()) {
          c *= f.value();
        } else if (f.kind() == ExprKind::Power && f.value() < 0) {
          bottom.push_back(Expr::power(f.args()[0], -f.value()));
        } else {
          top.push_back(f);
        }
      }
      std::string out;
      if (c < 0) {
        out = "-";
        c = -c;
      }
      std::string num;
      if (c != 1 || top.empty()) {
        Rational numer = c.get_num();
        num = to_string(numer);
        if (c.get_den() != 1) bottom.insert(bottom.begin(), Expr::constant(Rational(c.get_den())));
      }
      if (!top.empty()) num += (num.empty() ? "" : "*") + print_factor_list(top, chart);
      out += num;
      if (!bottom.empty()) {
        std::string den = print_factor_list(bottom, chart);
        out += "/" + (bottom.size() > 1 ? "(" + den + ")" : print(bottom.front(), chart, 3));
      }
      return wrap(out, out.front() == '-' ? 1 : 2);
    }
    case ExprKind::Power: {
      const Rational& q = e.value();
      std::string base = print(e.args()[0], chart, 4);
      std::string ex = is_integer(q) && q > 0 ? to_string(q) : "(" + to_string(q) + ")";
      return wrap(base + "^" + ex, 3);
    }
    case ExprKind::Log:
      return "ln(" + print(e.args()[0], chart, 0) + ")";
  }
  return "0";
}

}  // namespace

std::string to_string(const Expr& e, const Chart& chart) { return print(e, chart, 0); }

Polynomial to_polynomial(const Expr& e, const ChartPtr& chart) {
  RationalFunction rf = normalize(e, chart);
  if (!rf.is_polynomial()) throw NonRationalExpression("'" + to_string(e, *chart) + "' is not a polynomial");
  return rf.num() * Rational(1 / rf.den().constant_value());
}

}  // namespace semideg
