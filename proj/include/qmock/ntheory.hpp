#ifndef QMOCK_NTHEORY_HPP
#define QMOCK_NTHEORY_HPP

// Elementary number theory on machine integers: Kronecker symbols, Moebius,
// valuations, divisor sums, modular inverses, discriminants and Gauss sums.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qmock/errors.hpp"

namespace qmock {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

namespace nt {

constexpr i64 abs64(i64 x) noexcept { return x < 0 ? -x : x; }

/// Floor-style residue in [0, m).
constexpr u64 mod_floor(i64 a, u64 m) noexcept {
  if (a >= 0) return static_cast<u64>(a) % m;
  u64 r = static_cast<u64>(-(a + 1)) % m;  // avoids overflow at INT64_MIN
  return m - 1 - r;
}

constexpr u64 mulmod(u64 a, u64 b, u64 m) noexcept {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

constexpr u64 powmod(u64 base, u64 exp, u64 m) noexcept {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

constexpr u64 gcd(u64 a, u64 b) noexcept {
  while (b != 0) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr bool is_prime(u64 n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (u64 d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<u64> primes_up_to(u64 bound) {
  std::vector<u64> out;
  if (bound < 2) return out;
  std::vector<bool> composite(bound + 1, false);
  for (u64 i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return out;
}

/// Prime factorization by trial division, as (prime, exponent) pairs.
inline std::vector<std::pair<u64, unsigned>> factorize(u64 n) {
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::vector<u64> divisors(u64 n) {
  std::vector<u64> small, large;
  for (u64 d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

inline u64 euler_phi(u64 n) {
  u64 result = n;
  for (auto [p, e] : factorize(n)) result = result / p * (p - 1);
  return result;
}

/// Kronecker symbol (a/n), extended to all n with the usual rules at 2, -1 and 0.
constexpr int kronecker(i64 a, i64 n) noexcept {
  // (2/a) for odd a, indexed by a mod 8
  constexpr int two_table[8] = {0, 1, 0, -1, 0, -1, 0, 1};
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  if ((a & 1) == 0 && (n & 1) == 0) return 0;

  int k = 1;
  int v = 0;
  while ((n & 1) == 0) {
    ++v;
    n /= 2;
  }
  if (v & 1) k = two_table[a & 7];
  if (n < 0) {
    n = -n;
    if (a < 0) k = -k;
  }
  // n is now odd and positive
  while (true) {
    if (a == 0) return n > 1 ? 0 : k;
    v = 0;
    while ((a & 1) == 0) {
      ++v;
      a /= 2;
    }
    if (v & 1) k *= two_table[n & 7];
    if ((a & 3) == 3 && (n & 3) == 3) k = -k;
    i64 r = abs64(a);
    a = n % r;
    n = r;
  }
}

inline int moebius(u64 n) {
  int mu = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

constexpr unsigned valuation(u64 n, u64 p) noexcept {
  unsigned e = 0;
  while (n != 0 && n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

/// Sum of d^k over the divisors d of n, exactly.
inline mpz_class sigma(u64 n, unsigned k) {
  mpz_class total = 0;
  for (u64 d : divisors(n)) {
    mpz_class term;
    mpz_ui_pow_ui(term.get_mpz_t(), d, k);
    total += term;
  }
  return total;
}

/// Sum of d^k over the divisors d of n, reduced mod m.
inline u64 sigma(u64 n, unsigned k, u64 m) {
  u64 total = 0;
  for (u64 d : divisors(n)) total = (total + powmod(d, k, m)) % m;
  return total;
}

/// x with a*x = 1 (mod m). Throws NotInvertible when gcd(a, m) > 1.
inline u64 mod_inverse(i64 a, u64 m) {
  if (m < 2) throw Error(ErrorCode::InvalidArgument, "modulus must be >= 2");
  __int128 r0 = static_cast<__int128>(m), r1 = mod_floor(a, m);
  __int128 t0 = 0, t1 = 1;
  while (r1 != 0) {
    __int128 q = r0 / r1;
    std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
    std::tie(t0, t1) = std::pair{t1, t0 - q * t1};
  }
  if (r0 != 1)
    throw Error(ErrorCode::NotInvertible,
                std::to_string(a) + " has no inverse mod " + std::to_string(m));
  if (t0 < 0) t0 += m;
  return static_cast<u64>(t0);
}

constexpr bool is_squarefree(u64 n) noexcept {
  for (u64 p = 2; p * p <= n; ++p)
    if (n % (p * p) == 0) return false;
  return true;
}

constexpr bool is_fundamental_discriminant(i64 d) noexcept {
  if (d == 0 || d == 1) return false;
  u64 mag = static_cast<u64>(abs64(d));
  if (mod_floor(d, 4) == 1) return is_squarefree(mag);
  if (mod_floor(d, 4) != 0) return false;
  i64 m = d / 4;
  u64 r = mod_floor(m, 4);
  return (r == 2 || r == 3) && is_squarefree(mag / 4);
}

}  // namespace nt

/// A negative fundamental discriminant.
class Discriminant {
 public:
  explicit Discriminant(i64 value) : value_(value) {
    if (value >= 0 || !nt::is_fundamental_discriminant(value))
      throw Error(ErrorCode::InvalidArgument,
                  std::to_string(value) + " is not a negative fundamental discriminant");
  }

  i64 value() const noexcept { return value_; }
  u64 magnitude() const noexcept { return static_cast<u64>(-value_); }

  /// The quadratic character n -> (value/n).
  int chi(i64 n) const noexcept { return nt::kronecker(value_, n); }

  friend bool operator==(const Discriminant&, const Discriminant&) = default;

 private:
  i64 value_;
};

enum class SplittingType { split, inert, ramified };

constexpr const char* to_string(SplittingType t) noexcept {
  switch (t) {
    case SplittingType::split: return "split";
    case SplittingType::inert: return "inert";
    case SplittingType::ramified: return "ramified";
  }
  return "?";
}

namespace nt {

inline SplittingType splitting_type(u64 ell, const Discriminant& delta) {
  if (delta.magnitude() % ell == 0) return SplittingType::ramified;
  return delta.chi(static_cast<i64>(ell)) == 1 ? SplittingType::split : SplittingType::inert;
}

/// G(a, delta) / G(1, delta). Holds for every a because the character is primitive.
inline int gauss_sum_ratio(i64 a, const Discriminant& delta) { return delta.chi(a); }

/// G(a, delta) = sum over s mod |delta| of (delta/s) e(a s / delta), summed directly.
inline std::complex<double> gauss_sum_numeric(i64 a, const Discriminant& delta) {
  const u64 mag = delta.magnitude();
  std::complex<double> total{0.0, 0.0};
  for (u64 s = 0; s < mag; ++s) {
    int chi = delta.chi(static_cast<i64>(s));
    if (chi == 0) continue;
    // a s / delta = -(a s) / |delta|; reduce the numerator first
    u64 num = mod_floor(-static_cast<i64>(mulmod(mod_floor(a, mag), s, mag)), mag);
    double angle = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(mag);
    total += static_cast<double>(chi) * std::complex<double>{std::cos(angle), std::sin(angle)};
  }
  return total;
}

}  // namespace nt
}  // namespace qmock

#endif  // QMOCK_NTHEORY_HPP
