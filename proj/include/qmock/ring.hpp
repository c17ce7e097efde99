#ifndef QMOCK_RING_HPP
#define QMOCK_RING_HPP

// Coefficient rings for truncated q-series. A ring is a small value object
// with a `value_type` and the arithmetic the series kernels need. Two rings
// are provided: exact integers (GMP) and integers mod m for 2 <= m < 2^63.

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "qmock/errors.hpp"
#include "qmock/ntheory.hpp"

namespace qmock {

class IntegerRing {
 public:
  using value_type = mpz_class;

  static constexpr u64 modulus() noexcept { return 0; }
  static constexpr bool exact = true;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(i64 x) const { return mpz_class(static_cast<long>(x)); }
  value_type from_mpz(const mpz_class& x) const { return x; }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }

  void add_to(value_type& acc, const value_type& x) const { acc += x; }
  void sub_from(value_type& acc, const value_type& x) const { acc -= x; }
  void add_mul(value_type& acc, const value_type& a, const value_type& b) const {
    mpz_addmul(acc.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }

  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool is_unit(const value_type& a) const { return a == 1 || a == -1; }

  value_type inverse(const value_type& a) const {
    if (!is_unit(a)) throw Error(ErrorCode::NotInvertible, a.get_str() + " is not a unit in Z");
    return a;
  }

  /// a / b, requiring exact divisibility.
  value_type divide(const value_type& a, const value_type& b) const {
    if (sgn(b) == 0 || !mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t()))
      throw Error(ErrorCode::NotInvertible, a.get_str() + " is not divisible by " + b.get_str());
    value_type q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
  }

  value_type pow(const value_type& a, u64 e) const {
    value_type r;
    mpz_pow_ui(r.get_mpz_t(), a.get_mpz_t(), e);
    return r;
  }

  /// Signed integer representative.
  mpz_class lift(const value_type& a) const { return a; }
  std::string to_string(const value_type& a) const { return a.get_str(); }

  friend bool operator==(const IntegerRing&, const IntegerRing&) = default;
};

class ModularRing {
 public:
  using value_type = u64;

  static constexpr bool exact = false;

  explicit ModularRing(u64 m) : m_(m) {
    if (m < 2 || m >= (u64{1} << 63))
      throw Error(ErrorCode::InvalidArgument, "modulus must satisfy 2 <= m < 2^63");
  }

  u64 modulus() const noexcept { return m_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(i64 x) const { return nt::mod_floor(x, m_); }
  value_type from_mpz(const mpz_class& x) const {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), m_);
    return r.get_ui();
  }

  value_type add(value_type a, value_type b) const {
    u64 s = a + b;
    return s >= m_ ? s - m_ : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + (m_ - b); }
  value_type neg(value_type a) const { return a == 0 ? 0 : m_ - a; }
  value_type mul(value_type a, value_type b) const { return nt::mulmod(a, b, m_); }

  void add_to(value_type& acc, value_type x) const { acc = add(acc, x); }
  void sub_from(value_type& acc, value_type x) const { acc = sub(acc, x); }
  void add_mul(value_type& acc, value_type a, value_type b) const { acc = add(acc, mul(a, b)); }

  bool is_zero(value_type a) const { return a == 0; }
  bool is_unit(value_type a) const { return nt::gcd(a, m_) == 1; }
  value_type inverse(value_type a) const { return nt::mod_inverse(static_cast<i64>(a), m_); }

  value_type divide(value_type a, value_type b) const { return mul(a, inverse(b)); }

  value_type pow(value_type a, u64 e) const { return nt::powmod(a, e, m_); }

  /// Representative in (-m/2, m/2].
  mpz_class lift(value_type a) const {
    mpz_class r(static_cast<unsigned long>(a));
    if (a > m_ / 2) r -= mpz_class(static_cast<unsigned long>(m_));
    return r;
  }
  std::string to_string(value_type a) const { return std::to_string(a); }

  friend bool operator==(const ModularRing&, const ModularRing&) = default;

 private:
  u64 m_;
};

/// p^e in the ring, reducing the exponent by Euler's theorem when p is a unit mod m.
inline IntegerRing::value_type power_of(const IntegerRing& ring, u64 p, u64 e) {
  return ring.pow(mpz_class(static_cast<unsigned long>(p)), e);
}

inline ModularRing::value_type power_of(const ModularRing& ring, u64 p, u64 e) {
  const u64 m = ring.modulus();
  // Factoring m for phi(m) stays cheap below 2^32.
  if (m <= (u64{1} << 32) && nt::gcd(p % m, m) == 1) {
    const u64 phi = nt::euler_phi(m);
    e %= phi;
  }
  return nt::powmod(p, e, m);
}

}  // namespace qmock

#endif  // QMOCK_RING_HPP
