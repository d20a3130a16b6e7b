#include "semideg/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace semideg {

Monomial Monomial::variable(std::size_t var, unsigned exponent) {
  Monomial m;
  m.set(var, exponent);
  return m;
}

void Monomial::set(std::size_t var, unsigned exponent) {
  if (var >= kMaxVariables) throw std::out_of_range("monomial variable index");
  degree_ = static_cast<std::uint16_t>(degree_ - exp_[var] + exponent);
  exp_[var] = static_cast<std::uint16_t>(exponent);
}

bool Monomial::divides(const Monomial& other) const {
  for (std::size_t v = 0; v < kMaxVariables; ++v)
    if (exp_[v] > other.exp_[v]) return false;
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial m;
  for (std::size_t v = 0; v < kMaxVariables; ++v) m.exp_[v] = static_cast<std::uint16_t>(exp_[v] + other.exp_[v]);
  m.degree_ = static_cast<std::uint16_t>(degree_ + other.degree_);
  return m;
}

Monomial Monomial::operator/(const Monomial& other) const {
  Monomial m;
  for (std::size_t v = 0; v < kMaxVariables; ++v) m.exp_[v] = static_cast<std::uint16_t>(exp_[v] - other.exp_[v]);
  m.degree_ = static_cast<std::uint16_t>(degree_ - other.degree_);
  return m;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
  Monomial m;
  for (std::size_t v = 0; v < kMaxVariables; ++v) m.set(v, std::min(a.exp_[v], b.exp_[v]));
  return m;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  if (a.degree_ != b.degree_) return a.degree_ <=> b.degree_;
  for (std::size_t v = 0; v < kMaxVariables; ++v)
    if (a.exp_[v] != b.exp_[v]) return a.exp_[v] <=> b.exp_[v];
  return std::strong_ordering::equal;
}

Polynomial::Polynomial(const Rational& constant) {
  if (constant != 0) terms_.push_back({Monomial{}, constant});
  if (!terms_.empty()) terms_[0].coeff.canonicalize();
}

Polynomial Polynomial::variable(std::size_t var) { return monomial(Monomial::variable(var), Rational(1)); }

Polynomial Polynomial::monomial(const Monomial& m, const Rational& coeff) {
  Polynomial p;
  if (coeff != 0) {
    p.terms_.push_back({m, coeff});
    p.terms_[0].coeff.canonicalize();
  }
  return p;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.monomial > b.monomial; });
  Polynomial p;
  p.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().monomial == t.monomial) {
      p.terms_.back().coeff += t.coeff;
      if (p.terms_.back().coeff == 0) p.terms_.pop_back();
    } else if (t.coeff != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

Rational Polynomial::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_constant()) throw std::logic_error("polynomial is not constant");
  return terms_[0].coeff;
}

unsigned Polynomial::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.monomial[var]);
  return d;
}

unsigned Polynomial::total_degree() const {
  return terms_.empty() ? 0 : terms_.front().monomial.degree();
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& t : p.terms_) t.coeff = -t.coeff;
  return p;
}

namespace {

std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].monomial > b[j].monomial)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].monomial > a[i].monomial) {
      out.push_back(b[j++]);
      if (subtract) out.back().coeff = -out.back().coeff;
    } else {
      Rational c = subtract ? Rational(a[i].coeff - b[j].coeff) : Rational(a[i].coeff + b[j].coeff);
      if (c != 0) out.push_back({a[i].monomial, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  terms_ = merge(terms_, other.terms_, false);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  terms_ = merge(terms_, other.terms_, true);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial{};
  if (b.is_monomial()) return a.shifted(b.terms_[0].monomial) * b.terms_[0].coeff;
  if (a.is_monomial()) return b.shifted(a.terms_[0].monomial) * a.terms_[0].coeff;
  std::vector<Term> products;
  products.reserve(a.size() * b.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) products.push_back({s.monomial * t.monomial, s.coeff * t.coeff});
  return Polynomial::from_terms(std::move(products));
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  *this = *this * other;
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& scalar) {
  if (scalar == 0) {
    terms_.clear();
  } else {
    Rational c = scalar;
    c.canonicalize();
    for (auto& t : terms_) t.coeff *= c;
  }
  return *this;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].monomial != b.terms_[i].monomial || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  return true;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  Polynomial result(1);
  Polynomial base = *this;
  while (exponent > 0) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent > 0) base *= base;
  }
  return result;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    unsigned e = t.monomial[var];
    if (e == 0) continue;
    Monomial m = t.monomial;
    m.set(var, e - 1);
    out.push_back({m, t.coeff * e});
  }
  // Lowering one exponent can reorder terms of equal degree only by degree, so re-sort.
  return from_terms(std::move(out));
}

Polynomial Polynomial::shifted(const Monomial& m) const {
  Polynomial p = *this;
  for (auto& t : p.terms_) t.monomial = t.monomial * m;
  return p;
}

std::vector<Polynomial> Polynomial::coefficients_in(std::size_t var) const {
  std::vector<std::vector<Term>> buckets(degree_in(var) + 1);
  for (const auto& t : terms_) {
    Monomial m = t.monomial;
    unsigned e = m[var];
    m.set(var, 0);
    buckets[e].push_back({m, t.coeff});
  }
  std::vector<Polynomial> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
  return out;
}

Polynomial Polynomial::leading_coefficient_in(std::size_t var) const {
  unsigned d = degree_in(var);
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.monomial[var] != d) continue;
    Monomial m = t.monomial;
    m.set(var, 0);
    out.push_back({m, t.coeff});
  }
  return from_terms(std::move(out));
}

Polynomial Polynomial::monic() const {
  if (terms_.empty() || terms_[0].coeff == 1) return *this;
  Rational inv = 1 / terms_[0].coeff;
  return *this * inv;
}

Monomial Polynomial::monomial_content() const {
  if (terms_.empty()) return Monomial{};
  Monomial g = terms_[0].monomial;
  for (const auto& t : terms_) g = Monomial::gcd(g, t.monomial);
  return g;
}

double Polynomial::eval(std::span<const double> values) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff.get_d();
    for (std::size_t var = 0; var < values.size(); ++var) {
      unsigned e = t.monomial[var];
      if (e != 0) v *= std::pow(values[var], static_cast<int>(e));
    }
    sum += v;
  }
  return sum;
}

Rational Polynomial::eval(std::span<const Rational> values) const {
  Rational sum = 0;
  for (const auto& t : terms_) {
    Rational v = t.coeff;
    for (std::size_t var = 0; var < values.size(); ++var) {
      unsigned e = t.monomial[var];
      if (e == 0) continue;
      mpz_class num, den;
      mpz_pow_ui(num.get_mpz_t(), values[var].get_num_mpz_t(), e);
      mpz_pow_ui(den.get_mpz_t(), values[var].get_den_mpz_t(), e);
      v *= Rational(num, den);
    }
    sum += v;
  }
  sum.canonicalize();
  return sum;
}

Polynomial divide_exact(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw std::logic_error("division by the zero polynomial");
  if (b.is_constant()) return a * Rational(1 / b.constant_value());
  Polynomial quotient;
  Polynomial rest = a;
  const Term& lead = b.leading_term();
  std::vector<Term> q;
  while (!rest.is_zero()) {
    const Term& lt = rest.leading_term();
    if (!lead.monomial.divides(lt.monomial)) throw std::logic_error("inexact polynomial division");
    Monomial m = lt.monomial / lead.monomial;
    Rational c = lt.coeff / lead.coeff;
    rest -= b.shifted(m) * c;
    q.push_back({m, c});
  }
  return Polynomial::from_terms(std::move(q));
}

Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, std::size_t var) {
  const unsigned db = b.degree_in(var);
  const Polynomial lcb = b.leading_coefficient_in(var);
  Polynomial r = a;
  while (!r.is_zero()) {
    const unsigned dr = r.degree_in(var);
    if (dr < db) break;
    Polynomial lcr = r.leading_coefficient_in(var);
    r = lcb * r - (lcr * b).shifted(Monomial::variable(var, dr - db));
    r = r.monic();
  }
  return r;
}

namespace {

constexpr std::uint64_t kPrime = 2147483647;  // 2^31 - 1

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) { return a * b % kPrime; }

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e > 0) {
    if (e & 1U) r = mul_mod(r, a);
    a = mul_mod(a, a);
    e >>= 1U;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a) { return pow_mod(a, kPrime - 2); }

// Returns false when the denominator vanishes mod p.
bool rational_mod(const Rational& q, std::uint64_t& out) {
  std::uint64_t den = mpz_fdiv_ui(q.get_den_mpz_t(), kPrime);
  if (den == 0) return false;
  out = mul_mod(mpz_fdiv_ui(q.get_num_mpz_t(), kPrime), inv_mod(den));
  return true;
}

// Image of p in F_p[var] after substituting `point` for the other variables.
bool univariate_image(const Polynomial& p, std::size_t var, const std::array<std::uint64_t, kMaxVariables>& point,
                      std::vector<std::uint64_t>& out) {
  out.assign(p.degree_in(var) + 1, 0);
  for (const auto& t : p.terms()) {
    std::uint64_t c;
    if (!rational_mod(t.coeff, c)) return false;
    for (std::size_t v = 0; v < kMaxVariables; ++v)
      if (v != var && t.monomial[v] != 0) c = mul_mod(c, pow_mod(point[v], t.monomial[v]));
    std::uint64_t& slot = out[t.monomial[var]];
    slot = (slot + c) % kPrime;
  }
  return out.back() != 0;
}

std::size_t univariate_gcd_degree(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
  auto trim = [](std::vector<std::uint64_t>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
  };
  trim(a);
  trim(b);
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    const std::uint64_t inv = inv_mod(b.back());
    while (a.size() >= b.size()) {
      const std::uint64_t f = mul_mod(a.back(), inv);
      const std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = (a[shift + i] + kPrime - mul_mod(f, b[i])) % kPrime;
      trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a.empty() ? 0 : a.size() - 1;
}

// Upper bound for deg_var gcd(a, b): a specialization keeping both leading
// coefficients nonzero can only raise the degree of the gcd.
unsigned gcd_degree_bound(const Polynomial& a, const Polynomial& b, std::size_t var) {
  std::uint64_t seed = 0x9E3779B97F4A7C15ULL ^ var;
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::array<std::uint64_t, kMaxVariables> point{};
    for (auto& x : point) {
      seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
      x = (seed >> 33) % (kPrime - 2) + 2;
    }
    std::vector<std::uint64_t> ia, ib;
    if (!univariate_image(a, var, point, ia) || !univariate_image(b, var, point, ib)) continue;
    return static_cast<unsigned>(univariate_gcd_degree(std::move(ia), std::move(ib)));
  }
  return std::min(a.degree_in(var), b.degree_in(var));
}

bool divides(const Polynomial& b, const Polynomial& a) {
  for (std::size_t v = 0; v < kMaxVariables; ++v)
    if (b.degree_in(v) > a.degree_in(v)) return false;
  try {
    divide_exact(a, b);
    return true;
  } catch (const std::logic_error&) {
    return false;
  }
}

// --- heuristic gcd over Z: evaluate, recurse, reconstruct xi-adically, verify by division.

mpz_class integer_content(const Polynomial& p) {
  mpz_class g = 0;
  for (const auto& t : p.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
  return g;
}

// Clears denominators and removes the integer content.
Polynomial integer_primitive(const Polynomial& p) {
  mpz_class l = 1;
  for (const auto& t : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
  Polynomial q = p * Rational(l);
  return q * Rational(mpz_class(1), integer_content(q));
}

mpz_class max_norm(const Polynomial& p) {
  mpz_class m = 0;
  for (const auto& t : p.terms()) m = std::max<mpz_class>(m, abs(t.coeff.get_num()));
  return m;
}

Polynomial evaluate_at(const Polynomial& p, std::size_t var, const mpz_class& xi) {
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    mpz_class power;
    mpz_pow_ui(power.get_mpz_t(), xi.get_mpz_t(), t.monomial[var]);
    Monomial m = t.monomial;
    m.set(var, 0);
    out.push_back({m, t.coeff * Rational(power)});
  }
  return Polynomial::from_terms(std::move(out));
}

std::optional<Polynomial> heuristic_gcd(const Polynomial& a, const Polynomial& b) {
  std::size_t var = kMaxVariables;
  for (std::size_t v = kMaxVariables; v-- > 0;)
    if (a.depends_on(v) || b.depends_on(v)) {
      var = v;
      break;
    }
  mpz_class ca = integer_content(a), cb = integer_content(b), cg;
  mpz_gcd(cg.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  if (var == kMaxVariables) return Polynomial(Rational(cg));
  if (a.is_constant() || b.is_constant()) return Polynomial(Rational(cg));
  Polynomial pa = a * Rational(mpz_class(1), ca), pb = b * Rational(mpz_class(1), cb);

  mpz_class xi = 2 * std::min(max_norm(pa), max_norm(pb)) + 29;
  const std::size_t degree = std::max(pa.degree_in(var), pb.degree_in(var));
  for (int attempt = 0; attempt < 6; ++attempt) {
    if (mpz_sizeinbase(xi.get_mpz_t(), 2) * degree > 60000) break;
    Polynomial ea = evaluate_at(pa, var, xi), eb = evaluate_at(pb, var, xi);
    if (!ea.is_zero() && !eb.is_zero()) {
      if (auto h = heuristic_gcd(ea, eb)) {
        std::vector<Term> rebuilt;
        Polynomial rest = *h;
        const mpz_class half = xi / 2;
        for (unsigned i = 0; !rest.is_zero(); ++i) {
          std::vector<Term> digit;
          for (const auto& t : rest.terms()) {
            mpz_class c = t.coeff.get_num() % xi;
            if (c < 0) c += xi;
            if (c > half) c -= xi;
            if (c != 0) digit.push_back({t.monomial, Rational(c)});
          }
          Polynomial g = Polynomial::from_terms(digit);
          for (auto& t : digit) rebuilt.push_back({t.monomial * Monomial::variable(var, i), t.coeff});
          rest = (rest - g) * Rational(mpz_class(1), xi);
        }
        Polynomial candidate = Polynomial::from_terms(std::move(rebuilt));
        if (!candidate.is_zero()) {
          candidate = candidate * Rational(mpz_class(1), integer_content(candidate));
          if (divides(candidate, pa) && divides(candidate, pb)) return candidate * Rational(cg);
        }
      }
    }
    xi = xi * 73794 / 27011;
  }
  return std::nullopt;
}

std::size_t lowest_variable(const Polynomial& p) {
  std::size_t best = kMaxVariables;
  for (const auto& t : p.terms())
    for (std::size_t v = 0; v < best; ++v)
      if (t.monomial[v] != 0) {
        best = v;
        break;
      }
  return best;
}

Polynomial content_in(const Polynomial& p, std::size_t var) {
  Polynomial g;
  for (const auto& c : p.coefficients_in(var)) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) return Polynomial(1);
  }
  return g;
}

Polynomial primitive_part_in(const Polynomial& p, std::size_t var) {
  return divide_exact(p, content_in(p, var)).monic();
}

Polynomial gcd_without_monomial_content(Polynomial a, Polynomial b) {
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  const std::size_t var = std::min(lowest_variable(a), lowest_variable(b));
  if (!a.depends_on(var)) return gcd(a, content_in(b, var));
  if (!b.depends_on(var)) return gcd(content_in(a, var), b);

  Polynomial ca = content_in(a, var);
  Polynomial cb = content_in(b, var);
  Polynomial c = gcd(ca, cb);
  Polynomial pa = divide_exact(a, ca).monic();
  Polynomial pb = divide_exact(b, cb).monic();
  if (pa.degree_in(var) < pb.degree_in(var)) std::swap(pa, pb);
  while (true) {
    Polynomial r = pseudo_remainder(pa, pb, var);
    if (r.is_zero()) break;
    if (!r.depends_on(var)) {
      pb = Polynomial(1);
      break;
    }
    pa = std::move(pb);
    pb = primitive_part_in(r, var);
  }
  return (c * pb).monic();
}

}  // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  if (a == b) return a.monic();

  const Monomial ma = a.monomial_content();
  const Monomial mb = b.monomial_content();
  const Polynomial common = Polynomial::monomial(Monomial::gcd(ma, mb), Rational(1));
  if (a.is_monomial() || b.is_monomial()) return common;

  Polynomial ra = ma.is_one() ? a : divide_exact(a, Polynomial::monomial(ma, Rational(1)));
  Polynomial rb = mb.is_one() ? b : divide_exact(b, Polynomial::monomial(mb, Rational(1)));

  bool trivial = true, a_bound = true, b_bound = true;
  for (std::size_t v = 0; v < kMaxVariables; ++v) {
    const unsigned da = ra.degree_in(v), db = rb.degree_in(v);
    if (da == 0 && db == 0) continue;
    const unsigned bound = (da == 0 || db == 0) ? 0 : gcd_degree_bound(ra, rb, v);
    if (bound > 0) trivial = false;
    a_bound = a_bound && bound == da;
    b_bound = b_bound && bound == db;
  }
  if (trivial) return common;
  if (b_bound && divides(rb, ra)) return (common * rb).monic();
  if (a_bound && divides(ra, rb)) return (common * ra).monic();
  if (auto h = heuristic_gcd(integer_primitive(ra), integer_primitive(rb))) return (common * *h).monic();
  return (common * gcd_without_monomial_content(std::move(ra), std::move(rb))).monic();
}

std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace semideg
