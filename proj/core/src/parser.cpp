#include "semideg/parser.hpp"

#include <cctype>
#include <string>

#include "semideg/errors.hpp"

namespace semideg {

namespace {

// expr   := term (('+' | '-') term)*
// term   := unary (('*' | '/') unary)*
// unary  := '-' unary | '+' unary | power
// power  := primary ('^' unary)?
// primary:= number | ident | ident '(' expr ')' | '(' expr ')'
class Parser {
 public:
  Parser(std::string_view text, const Chart& chart, Chart* declare) : text_(text), chart_(chart), declare_(declare) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != text_.size()) throw SyntaxError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) throw SyntaxError(std::string("expected '") + c + "' but input ended", pos_);
      throw SyntaxError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+')) terms.push_back(term());
      else if (accept('-')) terms.push_back(-term());
      else break;
    }
    return Expr::sum(std::move(terms));
  }

  Expr term() {
    Expr acc = unary();
    for (;;) {
      if (accept('*')) acc = acc * unary();
      else if (accept('/')) acc = acc / unary();
      else break;
    }
    return acc;
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    std::size_t at = pos_;
    Expr ex = unary();
    if (!ex.is_constant()) throw SyntaxError("exponent must be a rational constant", at);
    return Expr::power(base, ex.value());
  }

  Expr primary() {
    skip();
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      if (name == "ln" || name == "sqrt") {
        expect('(');
        Expr arg = expr();
        expect(')');
        return name == "ln" ? Expr::log(arg) : sqrt(arg);
      }
      auto var = chart_.find(name);
      if (!var) throw UnknownSymbol(name);
      return Expr::symbol(chart_.kind(*var), chart_.local_index(*var));
    }
    throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr number() {
    std::size_t start = pos_;
    std::string digits;
    std::size_t frac = 0;
    bool dot = false;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits += c;
        if (dot) ++frac;
      } else if (c == '.' && !dot) {
        dot = true;
      } else {
        break;
      }
      ++pos_;
    }
    if (digits.empty()) throw SyntaxError("malformed number", start);
    mpz_class num(digits, 10);
    mpz_class den = 1;
    for (std::size_t i = 0; i < frac; ++i) den *= 10;
    Rational q(num, den);
    q.canonicalize();
    return Expr::constant(q);
  }

  Expr sqrt(const Expr& arg) {
    Expr half = Expr::power(arg, Rational(1, 2));
    if (half.kind() != ExprKind::Power || arg.contains_log()) return half;
    // Radicands may only involve coordinates.
    auto coords = std::make_shared<const Chart>(chart_.coordinates());
    Polynomial p;
    try {
      RationalFunction rf = normalize(arg, coords);
      if (!rf.is_polynomial()) return half;
      p = rf.num() * Rational(1 / rf.den().constant_value());
    } catch (const Error&) {
      return half;
    }
    if (p.is_constant()) return half;
    if (auto a = chart_.find_atom_by_radicand(p)) return Expr::symbol(VarKind::Atom, *a);
    if (declare_ == nullptr) return half;
    std::size_t k = declare_->num_atoms() + 1;
    while (declare_->find("sqrt_" + std::to_string(k))) ++k;
    std::size_t a = declare_->add_atom("sqrt_" + std::to_string(k), p);
    return Expr::symbol(VarKind::Atom, a);
  }

  std::string_view text_;
  const Chart& chart_;
  Chart* declare_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, const Chart& chart) { return Parser(text, chart, nullptr).run(); }

Expr parse_expr_declaring(std::string_view text, Chart& chart) { return Parser(text, chart, &chart).run(); }

}  // namespace semideg
