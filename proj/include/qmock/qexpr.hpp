#ifndef QMOCK_QEXPR_HPP
#define QMOCK_QEXPR_HPP

// A small expression language over eta quotients, Eisenstein series, integer
// constants and q-monomials:
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | atom ('^' int)?
//   atom   := 'eta' '(' 'q' ('^' posint)? ')' | 'E' posint '(' 'q' ('^' posint)? ')'
//           | int | 'q' ('^' posint)? | '(' expr ')'

#include <gmpxx.h>

#include <cctype>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qmock/errors.hpp"
#include "qmock/ring.hpp"
#include "qmock/series.hpp"

namespace qmock::qexpr {

enum class Kind { add, sub, mul, div, neg, pow, eta, eis, int_const, q_monomial };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  Kind kind = Kind::int_const;
  ExprPtr lhs;          // binary operands, or the operand of neg / pow
  ExprPtr rhs;
  i64 exponent = 0;     // pow
  u64 scale = 1;        // eta(q^scale), E_k(q^scale); exponent of a q-monomial
  unsigned weight = 0;  // E_k
  mpz_class value;      // integer constant

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.exponent != b.exponent || a.scale != b.scale || a.weight != b.weight ||
        a.value != b.value)
      return false;
    auto same = [](const ExprPtr& x, const ExprPtr& y) { return (!x && !y) || (x && y && *x == *y); };
    return same(a.lhs, b.lhs) && same(a.rhs, b.rhs);
  }
};

inline Expr node(Kind k, ExprPtr lhs = nullptr, ExprPtr rhs = nullptr) {
  Expr x;
  x.kind = k;
  x.lhs = std::move(lhs);
  x.rhs = std::move(rhs);
  return x;
}

inline ExprPtr make_binary(Kind k, ExprPtr a, ExprPtr b) {
  return std::make_shared<const Expr>(node(k, std::move(a), std::move(b)));
}
inline ExprPtr make_neg(ExprPtr a) { return std::make_shared<const Expr>(node(Kind::neg, std::move(a))); }
inline ExprPtr make_pow(ExprPtr a, i64 e) {
  Expr x = node(Kind::pow, std::move(a));
  x.exponent = e;
  return std::make_shared<const Expr>(std::move(x));
}
inline ExprPtr make_eta(u64 scale) {
  Expr x = node(Kind::eta);
  x.scale = scale;
  return std::make_shared<const Expr>(std::move(x));
}
inline ExprPtr make_eis(unsigned k, u64 scale) {
  Expr x = node(Kind::eis);
  x.weight = k;
  x.scale = scale;
  return std::make_shared<const Expr>(std::move(x));
}
inline ExprPtr make_int(mpz_class v) {
  Expr x = node(Kind::int_const);
  x.value = std::move(v);
  return std::make_shared<const Expr>(std::move(x));
}
inline ExprPtr make_q(u64 e) {
  Expr x = node(Kind::q_monomial);
  x.scale = e;
  return std::make_shared<const Expr>(std::move(x));
}

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("operator or end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) const { throw SyntaxError(pos_, expected); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("'") + c + "'");
  }

  bool peek_digit() {
    skip();
    return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
  }

  std::string digits(const std::string& what) {
    if (!peek_digit()) fail(what);
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  u64 small(const std::string& what, std::size_t start) {
    std::string d = digits(what);
    if (d.size() > 18) {
      pos_ = start;
      fail(what + " below 10^18");
    }
    return std::stoull(d);
  }

  u64 posint() {
    skip();
    std::size_t start = pos_;
    u64 v = small("positive integer", start);
    if (v == 0) {
      pos_ = start;
      fail("positive integer");
    }
    return v;
  }

  std::string word() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  // 'q' ('^' posint)? inside eta(...) / E_k(...)
  u64 q_argument() {
    skip();
    std::size_t start = pos_;
    if (word() != "q") {
      pos_ = start;
      fail("'q'");
    }
    u64 scale = accept('^') ? posint() : 1;
    expect(')');
    return scale;
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (accept('+')) e = make_binary(Kind::add, e, term());
      else if (accept('-')) e = make_binary(Kind::sub, e, term());
      else return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    for (;;) {
      if (accept('*')) e = make_binary(Kind::mul, e, factor());
      else if (accept('/')) e = make_binary(Kind::div, e, factor());
      else return e;
    }
  }

  ExprPtr factor() {
    if (accept('-')) return make_neg(factor());
    ExprPtr base = atom();
    while (accept('^')) {
      bool negative = accept('-');
      skip();
      std::size_t start = pos_;
      i64 e = static_cast<i64>(small("integer exponent", start));
      base = make_pow(base, negative ? -e : e);
    }
    return base;
  }

  ExprPtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("'(', integer, 'q', 'eta' or 'E'");
    if (accept('(')) {
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    if (peek_digit()) return make_int(mpz_class(digits("integer")));
    std::size_t start = pos_;
    std::string w = word();
    if (w == "eta") {
      expect('(');
      return make_eta(q_argument());
    }
    if (w == "E") {
      skip();
      std::size_t at = pos_;
      u64 k = posint();
      if (k % 2 != 0 || k > 1000) {
        pos_ = at;
        fail("even weight");
      }
      expect('(');
      return make_eis(static_cast<unsigned>(k), q_argument());
    }
    if (w == "q") {
      // q^n binds here; a signed exponent is left to the factor rule
      std::size_t save = pos_;
      if (accept('^') && peek_digit()) return make_q(posint());
      pos_ = save;
      return make_q(1);
    }
    pos_ = start;
    fail("'(', integer, 'q', 'eta' or 'E'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline int precedence(Kind k) {
  switch (k) {
    case Kind::add: case Kind::sub: return 1;
    case Kind::mul: case Kind::div: return 2;
    case Kind::neg: return 3;
    case Kind::pow: return 4;
    default: return 5;
  }
}

}  // namespace detail

/// Parses `text`; throws SyntaxError with the byte offset of the first bad token.
inline ExprPtr parse(std::string_view text) { return detail::Parser(text).parse(); }

/// Canonical text form; parse(print(e)) == e.
inline std::string print(const Expr& e) {
  auto wrap = [](const Expr& child, bool paren) { return paren ? "(" + print(child) + ")" : print(child); };
  const int prec = detail::precedence(e.kind);
  switch (e.kind) {
    case Kind::add: case Kind::sub: case Kind::mul: case Kind::div: {
      const char op = e.kind == Kind::add ? '+' : e.kind == Kind::sub ? '-' : e.kind == Kind::mul ? '*' : '/';
      // left-associative: the right operand needs parentheses at equal precedence
      return wrap(*e.lhs, detail::precedence(e.lhs->kind) < prec) + op +
             wrap(*e.rhs, detail::precedence(e.rhs->kind) <= prec);
    }
    case Kind::neg:
      return "-" + wrap(*e.lhs, detail::precedence(e.lhs->kind) < prec);
    case Kind::pow:
      // a bare q-monomial base would absorb a following positive exponent
      return wrap(*e.lhs, detail::precedence(e.lhs->kind) < 5 ||
                              (e.lhs->kind == Kind::q_monomial && e.lhs->scale == 1 && e.exponent >= 0)) +
             "^" + std::to_string(e.exponent);
    case Kind::eta:
      return e.scale == 1 ? "eta(q)" : "eta(q^" + std::to_string(e.scale) + ")";
    case Kind::eis:
      return "E" + std::to_string(e.weight) + (e.scale == 1 ? "(q)" : "(q^" + std::to_string(e.scale) + ")");
    case Kind::int_const:
      return e.value.get_str();
    case Kind::q_monomial:
      return e.scale == 1 ? "q" : "q^" + std::to_string(e.scale);
  }
  return {};
}

inline std::string print(const ExprPtr& e) { return print(*e); }

namespace detail {

// q^{v24/24} * s(q), with s known on q^0..q^{s.prec()-1}.
template <class Ring>
struct Value {
  i64 v24;
  Series<Ring> s;

  i64 known24() const { return v24 + 24 * static_cast<i64>(s.prec()); }  // first unknown exponent, in 1/24
};

struct NeedMorePrecision {};

// Re-expresses x as q^{v24/24} * (series of length prec); needs v24 <= x.v24.
template <class Ring>
Value<Ring> align_to(const Value<Ring>& x, i64 v24, std::size_t prec) {
  const std::size_t shift = static_cast<std::size_t>((x.v24 - v24) / 24);
  std::vector<typename Ring::value_type> c(prec, x.s.ring().zero());
  for (std::size_t i = shift; i < prec && i - shift < x.s.prec(); ++i) c[i] = x.s[i - shift];
  return {v24, Series<Ring>(x.s.ring(), std::move(c))};
}

template <class Ring>
Value<Ring> add_values(const Value<Ring>& a, const Value<Ring>& b, bool subtract) {
  if ((a.v24 - b.v24) % 24 != 0)
    throw Error(ErrorCode::ExponentMismatch, "terms differ by a fractional power of q");
  const i64 v = std::min(a.v24, b.v24);
  const i64 known = std::min(a.known24(), b.known24());
  const std::size_t prec = known > v ? static_cast<std::size_t>((known - v) / 24) : 0;
  auto x = align_to(a, v, prec);
  auto y = align_to(b, v, prec);
  return {v, subtract ? sub(x.s, y.s) : add(x.s, y.s)};
}

template <class Ring>
Value<Ring> multiply(const Value<Ring>& a, const Value<Ring>& b) {
  return {a.v24 + b.v24, mul(a.s, b.s)};
}

// 1/x, factoring out the lowest nonzero power of q.
template <class Ring>
Value<Ring> reciprocal(const Value<Ring>& x) {
  const Ring& ring = x.s.ring();
  std::size_t j = 0;
  while (j < x.s.prec() && ring.is_zero(x.s[j])) ++j;
  if (j == x.s.prec()) throw NeedMorePrecision{};
  if (!ring.is_unit(x.s[j]))
    throw Error(ErrorCode::NonUnitDenominator,
                "denominator leads with " + ring.to_string(x.s[j]) + ", which is not a unit");
  std::vector<typename Ring::value_type> c(x.s.coeffs().begin() + j, x.s.coeffs().end());
  return {-(x.v24 + 24 * static_cast<i64>(j)), invert(Series<Ring>(ring, std::move(c)))};
}

template <class Ring>
Value<Ring> eval(const Expr& e, std::size_t W, const Ring& ring) {
  switch (e.kind) {
    case Kind::add: return add_values(eval(*e.lhs, W, ring), eval(*e.rhs, W, ring), false);
    case Kind::sub: return add_values(eval(*e.lhs, W, ring), eval(*e.rhs, W, ring), true);
    case Kind::mul: return multiply(eval(*e.lhs, W, ring), eval(*e.rhs, W, ring));
    case Kind::div: return multiply(eval(*e.lhs, W, ring), reciprocal(eval(*e.rhs, W, ring)));
    case Kind::neg: {
      auto x = eval(*e.lhs, W, ring);
      return {x.v24, neg(x.s)};
    }
    case Kind::pow: {
      const u64 n = static_cast<u64>(e.exponent < 0 ? -e.exponent : e.exponent);
      if (e.lhs->kind == Kind::eta && e.exponent < 0) {
        // prod (1 - q^{tk})^{-n} by recurrence passes
        const u64 t = e.lhs->scale;
        auto s = Series<Ring>::one(ring, W);
        for (u64 k = 1; t * k < W; ++k) s = mul_binomial_inverse(s, t * k, +1, static_cast<unsigned>(n));
        return {-static_cast<i64>(t * n), std::move(s)};
      }
      auto x = eval(*e.lhs, W, ring);
      if (e.exponent < 0) x = reciprocal(x);
      return {x.v24 * static_cast<i64>(n), pow(x.s, n)};
    }
    case Kind::eta: {
      // drop eta_product's whole-unit shift and keep the full prefactor in v24
      const std::size_t shift = e.scale / 24;
      auto full = eta_product(e.scale, W + shift, ring);
      std::vector<typename Ring::value_type> c(full.coeffs().begin() + shift, full.coeffs().end());
      return {static_cast<i64>(e.scale), Series<Ring>(ring, std::move(c))};
    }
    case Kind::eis:
      return {0, substitute_power(eisenstein(e.weight, W, ring), e.scale)};
    case Kind::int_const:
      return {0, Series<Ring>::monomial(ring, W, 0, ring.from_mpz(e.value))};
    case Kind::q_monomial:
      return {24 * static_cast<i64>(e.scale), Series<Ring>::one(ring, W)};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown expression node");
}

}  // namespace detail

/// Expansion of the expression on q^0..q^{prec-1}. The overall power of q must be
/// integral and the result must be holomorphic at q = 0.
template <class Ring>
Series<Ring> evaluate(const Expr& e, std::size_t prec, const Ring& ring) {
  std::size_t W = prec + 1;
  const std::size_t cap = 16 * (prec + 24);
  for (;;) {
    try {
      auto x = detail::eval(e, W, ring);
      if (x.v24 % 24 != 0)
        throw Error(ErrorCode::NonIntegralExponent,
                    "net prefactor q^(" + std::to_string(x.v24) + "/24) is not an integral power");
      const i64 v = x.v24 / 24;
      const i64 known = v + static_cast<i64>(x.s.prec());
      if (known < static_cast<i64>(prec)) {
        if (W >= cap) throw Error(ErrorCode::InsufficientPrecision, "precision loss exceeds the working bound");
        W += static_cast<std::size_t>(static_cast<i64>(prec) - known);
        continue;
      }
      for (i64 i = 0; i < -v && i < static_cast<i64>(x.s.prec()); ++i)
        if (!ring.is_zero(x.s[static_cast<std::size_t>(i)]))
          throw Error(ErrorCode::NegativeValuation,
                      "expansion has a nonzero q^" + std::to_string(i + v) + " term");
      std::vector<typename Ring::value_type> out(prec, ring.zero());
      for (std::size_t n = 0; n < prec; ++n) {
        const i64 idx = static_cast<i64>(n) - v;
        if (idx >= 0) out[n] = x.s[static_cast<std::size_t>(idx)];
      }
      return Series<Ring>(ring, std::move(out));
    } catch (const detail::NeedMorePrecision&) {
      if (W >= cap) throw Error(ErrorCode::NonUnitDenominator, "denominator vanishes to the working precision");
      W *= 2;
    }
  }
}

template <class Ring>
Series<Ring> evaluate(const ExprPtr& e, std::size_t prec, const Ring& ring) {
  return evaluate(*e, prec, ring);
}

}  // namespace qmock::qexpr

#endif  // QMOCK_QEXPR_HPP
