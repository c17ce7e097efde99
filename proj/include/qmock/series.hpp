#ifndef QMOCK_SERIES_HPP
#define QMOCK_SERIES_HPP

// Truncated q-series over a coefficient ring.
//
// A Series of precision P holds the coefficients of q^0 .. q^{P-1}, optionally
// multiplied by a fractional prefactor q^{t/24} with 0 <= t < 24. Values are
// immutable once built; every operation returns a new series.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "qmock/errors.hpp"
#include "qmock/ntheory.hpp"
#include "qmock/parallel.hpp"
#include "qmock/ring.hpp"

namespace qmock {

template <class Ring>
class Series {
 public:
  using ring_type = Ring;
  using value_type = typename Ring::value_type;

  Series(Ring ring, std::size_t prec, int frac24 = 0)
      : ring_(std::move(ring)), coeffs_(prec, ring_.zero()), frac24_(frac24) {
    check_frac();
  }

  Series(Ring ring, std::vector<value_type> coeffs, int frac24 = 0)
      : ring_(std::move(ring)), coeffs_(std::move(coeffs)), frac24_(frac24) {
    check_frac();
    if constexpr (!Ring::exact) {
      for (auto& c : coeffs_) c %= ring_.modulus();
    }
  }

  static Series one(const Ring& ring, std::size_t prec) { return monomial(ring, prec, 0, ring.one()); }

  /// c * q^exponent, truncated to prec.
  static Series monomial(const Ring& ring, std::size_t prec, std::size_t exponent, value_type c) {
    Series s(ring, prec);
    if (exponent < prec) s.coeffs_[exponent] = std::move(c);
    return s;
  }

  /// Coefficients given as machine integers, mainly for tests and literals.
  static Series from_ints(const Ring& ring, std::initializer_list<i64> values, int frac24 = 0) {
    std::vector<value_type> v;
    v.reserve(values.size());
    for (i64 x : values) v.push_back(ring.from_int(x));
    return Series(ring, std::move(v), frac24);
  }

  const Ring& ring() const noexcept { return ring_; }
  std::size_t prec() const noexcept { return coeffs_.size(); }
  int frac24() const noexcept { return frac24_; }
  const std::vector<value_type>& coeffs() const noexcept { return coeffs_; }
  const value_type& operator[](std::size_t n) const { return coeffs_[n]; }

  std::vector<value_type> take_coeffs() && { return std::move(coeffs_); }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [&](const auto& c) { return ring_.is_zero(c); });
  }

  friend bool operator==(const Series& a, const Series& b) {
    return a.ring_ == b.ring_ && a.frac24_ == b.frac24_ && a.coeffs_ == b.coeffs_;
  }

 private:
  void check_frac() const {
    if (frac24_ < 0 || frac24_ >= 24)
      throw Error(ErrorCode::InvalidArgument, "fractional exponent must be t/24 with 0 <= t < 24");
  }

  Ring ring_;
  std::vector<value_type> coeffs_;
  int frac24_;
};

using ExactSeries = Series<IntegerRing>;
using ModSeries = Series<ModularRing>;

namespace detail {

template <class Ring>
void require_same_ring(const Series<Ring>& a, const Series<Ring>& b) {
  if (!(a.ring() == b.ring()))
    throw Error(ErrorCode::RingMismatch, "series over different rings");
}

template <class Ring>
void require_compatible(const Series<Ring>& a, const Series<Ring>& b) {
  require_same_ring(a, b);
  if (a.frac24() != b.frac24())
    throw Error(ErrorCode::ExponentMismatch, "series carry different q^(t/24) prefactors");
}

/// Multiplies the series stored in `c` by (1 - sign q^step)^{-1} in place.
template <class Ring>
void binomial_inverse_pass(const Ring& ring, std::span<typename Ring::value_type> c, std::size_t step,
                           int sign) {
  if (sign > 0) {
    for (std::size_t n = step; n < c.size(); ++n) ring.add_to(c[n], c[n - step]);
  } else {
    for (std::size_t n = step; n < c.size(); ++n) ring.sub_from(c[n], c[n - step]);
  }
}

/// Residues mod m stored in a word type W with 2m - 1 representable, so sums
/// never overflow. Blocks of length `step` carry no internal dependency, so each
/// block is a straight vectorizable loop.
template <class W>
void binomial_inverse_pass_words(W m, std::span<W> c, std::size_t step, int sign) {
  W* data = c.data();
  const std::size_t n = c.size();
  for (std::size_t start = step; start < n; start += step) {
    const std::size_t len = std::min(step, n - start);
    W* __restrict dst = data + start;
    const W* __restrict src = data + start - step;
    if (sign > 0) {
      for (std::size_t i = 0; i < len; ++i) {
        const W s = static_cast<W>(dst[i] + src[i]);
        dst[i] = s >= m ? static_cast<W>(s - m) : s;
      }
    } else {
      for (std::size_t i = 0; i < len; ++i) {
        const W d = static_cast<W>(dst[i] + (m - src[i]));
        dst[i] = d >= m ? static_cast<W>(d - m) : d;
      }
    }
  }
}

template <class W>
void accumulate_words(W m, W* __restrict acc, const W* __restrict src, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) {
    const W s = static_cast<W>(acc[i] + src[i]);
    acc[i] = s >= m ? static_cast<W>(s - m) : s;
  }
}

inline void binomial_inverse_pass(const ModularRing& ring, std::span<u64> c, std::size_t step, int sign) {
  binomial_inverse_pass_words<u64>(ring.modulus(), c, step, sign);
}

/// acc[i] += x[i] over a span.
template <class Ring>
void accumulate_into(const Ring& ring, typename Ring::value_type* acc, std::span<const typename Ring::value_type> x) {
  for (std::size_t i = 0; i < x.size(); ++i) ring.add_to(acc[i], x[i]);
}

inline void accumulate_into(const ModularRing& ring, u64* acc, std::span<const u64> x) {
  accumulate_words<u64>(ring.modulus(), acc, x.data(), x.size());
}

// out[n] = sum_{i <= n} a[i] b[n - i] for n in [lo, hi). Only nonzero a[i] are visited.
inline void cauchy_range(const IntegerRing&, const std::vector<mpz_class>& a, const std::vector<std::size_t>& support,
                         const std::vector<mpz_class>& b, std::vector<mpz_class>& out, std::size_t lo, std::size_t hi) {
  for (std::size_t n = lo; n < hi; ++n) {
    mpz_class acc = 0;
    for (std::size_t i : support) {
      if (i > n) break;
      mpz_addmul(acc.get_mpz_t(), a[i].get_mpz_t(), b[n - i].get_mpz_t());
    }
    out[n] = std::move(acc);
  }
}

inline void cauchy_range(const ModularRing& ring, const std::vector<u64>& a, const std::vector<std::size_t>& support,
                         const std::vector<u64>& b, std::vector<u64>& out, std::size_t lo, std::size_t hi) {
  const u64 m = ring.modulus();
  if (m <= (u64{1} << 32)) {
    // products fit in 64 bits; 2^64 of them fit in the 128-bit accumulator
    for (std::size_t n = lo; n < hi; ++n) {
      u128 acc = 0;
      for (std::size_t i : support) {
        if (i > n) break;
        acc += static_cast<u128>(a[i] * b[n - i]);
      }
      out[n] = static_cast<u64>(acc % m);
    }
  } else {
    for (std::size_t n = lo; n < hi; ++n) {
      u64 acc = 0;
      for (std::size_t i : support) {
        if (i > n) break;
        acc = ring.add(acc, nt::mulmod(a[i], b[n - i], m));
      }
      out[n] = acc;
    }
  }
}

template <class Ring>
std::vector<std::size_t> support_of(const Ring& ring, const std::vector<typename Ring::value_type>& c,
                                    std::size_t limit) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < std::min(limit, c.size()); ++i)
    if (!ring.is_zero(c[i])) idx.push_back(i);
  return idx;
}

/// Moves coefficients up by `shift` places, dropping those that fall off the end.
template <class Ring>
std::vector<typename Ring::value_type> shifted_up(const Ring& ring, std::vector<typename Ring::value_type> c,
                                                  std::size_t shift) {
  if (shift == 0) return c;
  const std::size_t n = c.size();
  std::vector<typename Ring::value_type> out(n, ring.zero());
  for (std::size_t i = 0; i + shift < n; ++i) out[i + shift] = std::move(c[i]);
  return out;
}

}  // namespace detail

template <class Ring>
Series<Ring> add(const Series<Ring>& a, const Series<Ring>& b) {
  detail::require_compatible(a, b);
  const std::size_t p = std::min(a.prec(), b.prec());
  std::vector<typename Ring::value_type> out(p);
  for (std::size_t n = 0; n < p; ++n) out[n] = a.ring().add(a[n], b[n]);
  return Series<Ring>(a.ring(), std::move(out), a.frac24());
}

template <class Ring>
Series<Ring> sub(const Series<Ring>& a, const Series<Ring>& b) {
  detail::require_compatible(a, b);
  const std::size_t p = std::min(a.prec(), b.prec());
  std::vector<typename Ring::value_type> out(p);
  for (std::size_t n = 0; n < p; ++n) out[n] = a.ring().sub(a[n], b[n]);
  return Series<Ring>(a.ring(), std::move(out), a.frac24());
}

template <class Ring>
Series<Ring> neg(const Series<Ring>& a) {
  std::vector<typename Ring::value_type> out(a.prec());
  for (std::size_t n = 0; n < a.prec(); ++n) out[n] = a.ring().neg(a[n]);
  return Series<Ring>(a.ring(), std::move(out), a.frac24());
}

template <class Ring>
Series<Ring> scale(const typename Ring::value_type& c, const Series<Ring>& a) {
  std::vector<typename Ring::value_type> out(a.prec());
  for (std::size_t n = 0; n < a.prec(); ++n) out[n] = a.ring().mul(c, a[n]);
  return Series<Ring>(a.ring(), std::move(out), a.frac24());
}

/// Keeps the first `prec` coefficients (no-op when already shorter).
template <class Ring>
Series<Ring> truncate(const Series<Ring>& a, std::size_t prec) {
  if (prec >= a.prec()) return a;
  std::vector<typename Ring::value_type> out(a.coeffs().begin(), a.coeffs().begin() + prec);
  return Series<Ring>(a.ring(), std::move(out), a.frac24());
}

/// Multiplication by q^shift at fixed precision.
template <class Ring>
Series<Ring> shift_up(const Series<Ring>& a, std::size_t shift) {
  return Series<Ring>(a.ring(), detail::shifted_up(a.ring(), a.coeffs(), shift), a.frac24());
}

/// Truncated Cauchy product. Fractional prefactors add; a carry past 1 becomes a q-shift.
template <class Ring>
Series<Ring> mul(const Series<Ring>& a, const Series<Ring>& b) {
  detail::require_same_ring(a, b);
  const std::size_t p = std::min(a.prec(), b.prec());
  // the sparser operand drives the inner loop
  auto sa = detail::support_of(a.ring(), a.coeffs(), p);
  auto sb = detail::support_of(b.ring(), b.coeffs(), p);
  const bool swap = sb.size() < sa.size();
  const auto& lhs = swap ? b.coeffs() : a.coeffs();
  const auto& rhs = swap ? a.coeffs() : b.coeffs();
  const auto& support = swap ? sb : sa;

  std::vector<typename Ring::value_type> out(p, a.ring().zero());
  parallel::for_chunks(0, p, 256, [&](std::size_t lo, std::size_t hi) {
    detail::cauchy_range(a.ring(), lhs, support, rhs, out, lo, hi);
  });

  int frac = a.frac24() + b.frac24();
  std::size_t carry = 0;
  if (frac >= 24) {
    frac -= 24;
    carry = 1;
  }
  return Series<Ring>(a.ring(), detail::shifted_up(a.ring(), std::move(out), carry), frac);
}

template <class Ring>
Series<Ring> invert(const Series<Ring>& a) {
  const Ring& ring = a.ring();
  if (a.frac24() != 0)
    throw Error(ErrorCode::FractionalExponent, "cannot invert a series with a q^(t/24) prefactor");
  if (a.prec() == 0) return a;
  if (!ring.is_unit(a[0]))
    throw Error(ErrorCode::NonUnitConstantTerm, "constant term " + ring.to_string(a[0]) + " is not a unit");
  const auto inv0 = ring.inverse(a[0]);
  const auto support = detail::support_of(ring, a.coeffs(), a.prec());
  std::vector<typename Ring::value_type> b(a.prec(), ring.zero());
  b[0] = inv0;
  for (std::size_t n = 1; n < a.prec(); ++n) {
    typename Ring::value_type acc = ring.zero();
    for (std::size_t i : support) {
      if (i == 0) continue;
      if (i > n) break;
      ring.add_mul(acc, a[i], b[n - i]);
    }
    b[n] = ring.neg(ring.mul(inv0, acc));
  }
  return Series<Ring>(ring, std::move(b));
}

/// a * (1 - sign q^step)^{-e}, by e linear recurrence passes.
template <class Ring>
Series<Ring> mul_binomial_inverse(const Series<Ring>& a, std::size_t step, int sign, unsigned e) {
  if (step == 0) throw Error(ErrorCode::InvalidArgument, "binomial step must be positive");
  if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidArgument, "binomial sign must be +1 or -1");
  auto c = a.coeffs();
  for (unsigned pass = 0; pass < e; ++pass)
    detail::binomial_inverse_pass(a.ring(), std::span(c), step, sign);
  return Series<Ring>(a.ring(), std::move(c), a.frac24());
}

template <class Ring>
Series<Ring> pow(const Series<Ring>& a, u64 n) {
  Series<Ring> result = Series<Ring>::one(a.ring(), a.prec());
  Series<Ring> base = a;
  while (n > 0) {
    if (n & 1) result = mul(result, base);
    n >>= 1;
    if (n > 0) base = mul(base, base);
  }
  return result;
}

template <class Ring>
Series<Ring> q_derivative(const Series<Ring>& a) {
  if (a.frac24() != 0) throw Error(ErrorCode::FractionalExponent, "q d/dq needs an integral exponent");
  std::vector<typename Ring::value_type> out(a.prec());
  for (std::size_t n = 0; n < a.prec(); ++n) out[n] = a.ring().mul(a.ring().from_int(static_cast<i64>(n)), a[n]);
  return Series<Ring>(a.ring(), std::move(out));
}

/// (q d/dq g) / g.
template <class Ring>
Series<Ring> log_derivative(const Series<Ring>& g) {
  return mul(q_derivative(g), invert(g));
}

/// q^n -> q^{t n}, keeping the precision.
template <class Ring>
Series<Ring> substitute_power(const Series<Ring>& a, std::size_t t) {
  if (t == 0) throw Error(ErrorCode::InvalidArgument, "substitution scale must be positive");
  if (a.frac24() != 0) throw Error(ErrorCode::FractionalExponent, "substitution needs an integral exponent");
  std::vector<typename Ring::value_type> out(a.prec(), a.ring().zero());
  for (std::size_t n = 0; n * t < a.prec(); ++n) out[n * t] = a[n];
  return Series<Ring>(a.ring(), std::move(out));
}

/// eta(t tau) = q^{t/24} prod_{n>=1} (1 - q^{t n}), from the pentagonal number theorem.
/// Whole units of the prefactor are applied as a q-shift; the rest stays fractional.
template <class Ring>
Series<Ring> eta_product(std::size_t t, std::size_t prec, const Ring& ring) {
  if (t == 0) throw Error(ErrorCode::InvalidArgument, "eta scale must be positive");
  const std::size_t shift = t / 24;
  const int frac = static_cast<int>(t % 24);
  std::vector<typename Ring::value_type> c(prec, ring.zero());
  // exponents t*j(3j-1)/2 for j = 0, 1, -1, 2, -2, ...
  auto place = [&](u64 pent, int sign) {
    u64 idx = shift + t * pent;
    if (idx < prec) c[idx] = ring.from_int(sign);
    return idx < prec;
  };
  place(0, 1);
  for (u64 j = 1;; ++j) {
    const int sign = (j & 1) ? -1 : 1;
    bool lo = place(j * (3 * j - 1) / 2, sign);
    bool hi = place(j * (3 * j + 1) / 2, sign);
    if (!lo && !hi) break;
  }
  return Series<Ring>(ring, std::move(c), frac);
}

/// Bernoulli number B_k (B_1 = -1/2), exact.
inline mpq_class bernoulli(unsigned k) {
  static std::mutex guard;
  static std::vector<mpq_class> table;
  std::lock_guard lock(guard);
  if (table.size() <= k) {
    std::size_t target = std::max<std::size_t>(k + 1, 65);
    std::size_t start = table.size();
    table.resize(target);
    for (std::size_t m = start; m < target; ++m) {
      if (m == 0) {
        table[0] = 1;
        continue;
      }
      // sum_{j=0}^{m} C(m+1, j) B_j = 0
      mpq_class acc = 0;
      mpz_class binom = 1;  // C(m+1, 0)
      for (std::size_t j = 0; j < m; ++j) {
        acc += mpq_class(binom) * table[j];
        binom = binom * static_cast<unsigned long>(m + 1 - j) / static_cast<unsigned long>(j + 1);
      }
      table[m] = -acc / mpq_class(static_cast<unsigned long>(m + 1));
      table[m].canonicalize();
    }
  }
  return table[k];
}

namespace detail {

inline mpz_class eisenstein_factor(const IntegerRing&, unsigned k) {
  mpq_class f = mpq_class(-2 * static_cast<long>(k)) / bernoulli(k);
  f.canonicalize();
  if (f.get_den() != 1)
    throw Error(ErrorCode::NonIntegralNormalization,
                "-2k/B_k = " + f.get_str() + " is not an integer for k = " + std::to_string(k));
  return f.get_num();
}

inline u64 eisenstein_factor(const ModularRing& ring, unsigned k) {
  mpq_class f = mpq_class(-2 * static_cast<long>(k)) / bernoulli(k);
  f.canonicalize();
  u64 num = ring.from_mpz(f.get_num());
  u64 den = ring.from_mpz(f.get_den());
  if (!ring.is_unit(den))
    throw Error(ErrorCode::NotInvertible, "denominator of -2k/B_k is not invertible mod " +
                                              std::to_string(ring.modulus()));
  return ring.mul(num, ring.inverse(den));
}

}  // namespace detail

/// E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n.
template <class Ring>
Series<Ring> eisenstein(unsigned k, std::size_t prec, const Ring& ring) {
  if (k < 2 || k % 2 != 0) throw Error(ErrorCode::InvalidArgument, "Eisenstein weight must be even and >= 2");
  const auto factor = detail::eisenstein_factor(ring, k);
  std::vector<typename Ring::value_type> c(prec, ring.zero());
  // divisor-power sieve
  for (std::size_t d = 1; d < prec; ++d) {
    const auto dk = power_of(ring, d, k - 1);
    for (std::size_t n = d; n < prec; n += d) ring.add_to(c[n], dk);
  }
  for (std::size_t n = 1; n < prec; ++n) c[n] = ring.mul(factor, c[n]);
  if (prec > 0) c[0] = ring.one();
  return Series<Ring>(ring, std::move(c));
}

inline ModSeries reduce_mod(const ExactSeries& a, u64 m) {
  ModularRing ring(m);
  std::vector<u64> out(a.prec());
  for (std::size_t n = 0; n < a.prec(); ++n) out[n] = ring.from_mpz(a[n]);
  return ModSeries(ring, std::move(out), a.frac24());
}

/// Reduction of an already-modular series to a divisor modulus.
inline ModSeries reduce_mod(const ModSeries& a, u64 m) {
  if (a.ring().modulus() % m != 0)
    throw Error(ErrorCode::RingMismatch, "target modulus must divide the source modulus");
  ModularRing ring(m);
  std::vector<u64> out(a.prec());
  for (std::size_t n = 0; n < a.prec(); ++n) out[n] = a[n] % m;
  return ModSeries(ring, std::move(out), a.frac24());
}

template <class Ring>
Series<Ring> operator+(const Series<Ring>& a, const Series<Ring>& b) { return add(a, b); }
template <class Ring>
Series<Ring> operator-(const Series<Ring>& a, const Series<Ring>& b) { return sub(a, b); }
template <class Ring>
Series<Ring> operator-(const Series<Ring>& a) { return neg(a); }
template <class Ring>
Series<Ring> operator*(const Series<Ring>& a, const Series<Ring>& b) { return mul(a, b); }

}  // namespace qmock

#endif  // QMOCK_SERIES_HPP
