#ifndef QMOCK_BORCHERDS_HPP
#define QMOCK_BORCHERDS_HPP

// The normalized logarithmic derivative Phi*_{D,r} = sum b(n) q^n of a twisted
// generalized Borcherds product, its inversion back to c(n), and predictions
// of c(n) (hence of a_f / a_omega) mod ell^R from Hecke eigenvalue data.

#include <gmpxx.h>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qmock/congruence.hpp"
#include "qmock/errors.hpp"
#include "qmock/mocktheta.hpp"
#include "qmock/ntheory.hpp"
#include "qmock/ring.hpp"
#include "qmock/series.hpp"

namespace qmock {

struct TwistParams {
  Discriminant delta;
  i64 r;

  TwistParams(Discriminant d, i64 r_) : delta(d), r(r_) { require_twist(delta, r); }
  TwistParams(i64 d, i64 r_) : TwistParams(Discriminant(d), r_) {}
};

/// c(1) computed exactly; it is small because it reads a_f / a_omega at (|D| + 1)/24 or (|D| - 8)/12.
inline mpz_class exact_c1(const TwistParams& params) {
  auto e = c_plus_entry({params.delta, params.r, 1});
  if (!e.source) return 0;
  IntegerRing Z;
  const auto table = *e.source == MockFunction::f ? f_coeffs(e.index, Z) : omega_coeffs(e.index, Z);
  return mpz_class(e.multiplier) * table[e.index];
}

/// b(n) = (1/c(1)) sum_{d | n} c(d) d (D / (n/d)). `c` is indexed from 1.
template <class Ring>
typename Ring::value_type b_from_c(const std::vector<typename Ring::value_type>& c, u64 n, const Discriminant& delta,
                                   const Ring& ring) {
  if (n == 0 || n >= c.size()) throw Error(ErrorCode::InvalidArgument, "b_from_c index out of range");
  typename Ring::value_type acc = ring.zero();
  for (u64 d : nt::divisors(n)) {
    int chi = delta.chi(static_cast<i64>(n / d));
    if (chi == 0) continue;
    ring.add_mul(acc, c[d], ring.from_int(chi * static_cast<i64>(d)));
  }
  return ring.divide(acc, c[1]);
}

namespace detail {

inline mpz_class divide_by_index(const IntegerRing&, const mpz_class& value, u64 n) {
  if (!mpz_divisible_ui_p(value.get_mpz_t(), n))
    throw Error(ErrorCode::NonDivisible, value.get_str() + " is not divisible by " + std::to_string(n));
  mpz_class q;
  mpz_divexact_ui(q.get_mpz_t(), value.get_mpz_t(), n);
  return q;
}

inline u64 divide_by_index(const ModularRing& ring, u64 value, u64 n) {
  return ring.mul(value, ring.inverse(ring.from_int(static_cast<i64>(n))));
}

}  // namespace detail

/// c(n) = (c(1)/n) sum_{d | n} b(d) mu(n/d) (D / (n/d)). `b` is indexed from 1.
template <class Ring>
typename Ring::value_type c_from_b(const std::vector<typename Ring::value_type>& b, u64 n, const Discriminant& delta,
                                   const typename Ring::value_type& c1, const Ring& ring) {
  if (n == 0 || n >= b.size()) throw Error(ErrorCode::InvalidArgument, "c_from_b index out of range");
  typename Ring::value_type acc = ring.zero();
  for (u64 d : nt::divisors(n)) {
    int w = nt::moebius(n / d) * delta.chi(static_cast<i64>(n / d));
    if (w == 0) continue;
    ring.add_mul(acc, b[d], ring.from_int(w));
  }
  return detail::divide_by_index(ring, ring.mul(acc, c1), n);
}

template <class Ring>
struct PhiStar {
  TwistParams params;
  Series<Ring> series;  // b(0) = 0, b(1) = 1, ..., b(prec)
  mpz_class c1;

  std::size_t prec() const noexcept { return series.prec() - 1; }
  const typename Ring::value_type& b(std::size_t n) const { return series[n]; }
};

/// b(1..P) from c(1..P) by a Dirichlet-convolution sieve.
template <class Ring>
std::vector<typename Ring::value_type> b_series_from_c(const std::vector<typename Ring::value_type>& c,
                                                       const Discriminant& delta, const Ring& ring) {
  const std::size_t P = c.size() - 1;
  std::vector<typename Ring::value_type> acc(P + 1, ring.zero());
  for (std::size_t d = 1; d <= P; ++d) {
    if (ring.is_zero(c[d])) continue;
    const auto cd = ring.mul(c[d], ring.from_int(static_cast<i64>(d)));
    for (std::size_t j = 1; d * j <= P; ++j) {
      int chi = delta.chi(static_cast<i64>(j));
      if (chi == 1) ring.add_to(acc[d * j], cd);
      else if (chi == -1) ring.sub_from(acc[d * j], cd);
    }
  }
  for (std::size_t n = 1; n <= P; ++n) acc[n] = ring.divide(acc[n], c[1]);
  return acc;
}

/// Phi*_{D,r} to q^P.
template <class Ring>
PhiStar<Ring> phi_star(const TwistParams& params, std::size_t P, MockTables<Ring>& tables) {
  const Ring& ring = tables.ring();
  mpz_class c1 = exact_c1(params);
  if (c1 == 0)
    throw Error(ErrorCode::ZeroNormalizer, "c(1) = 0 for D = " + std::to_string(params.delta.value()) +
                                               ", r = " + std::to_string(params.r));
  if (P == 0) throw Error(ErrorCode::InvalidArgument, "precision must be positive");
  auto c = c_series(params.delta, params.r, P, tables);
  if (!ring.is_unit(c[1]) && !Ring::exact)
    throw Error(ErrorCode::NotInvertible, "c(1) = " + c1.get_str() + " is not invertible in the ring");
  auto b = b_series_from_c(c, params.delta, ring);
  return {params, Series<Ring>(ring, std::move(b)), c1};
}

struct NumericCoeff {
  boost::multiprecision::mpfr_float re;
  boost::multiprecision::mpfr_float im;
};

/// Evaluates the q-expansion triple sum with complex exponentials at the given
/// decimal precision and divides by -c(1) G(1, D). Entry 0 is unused.
/// digits10 = 0 picks a precision 40 digits beyond the largest term.
inline std::vector<NumericCoeff> phi_raw_numeric(const TwistParams& params, std::size_t P, unsigned digits10 = 0) {
  using boost::multiprecision::mpfr_float;
  if (P > 500) throw Error(ErrorCode::InvalidArgument, "the numeric oracle is limited to P <= 500");
  MockTables<IntegerRing> tables{IntegerRing{}};
  const auto c = c_series(params.delta, params.r, P, tables);
  const i64 c1 = c[1].get_si();
  if (c[1] == 0) throw Error(ErrorCode::ZeroNormalizer, "c(1) = 0");

  if (digits10 == 0) {
    std::size_t widest = 1;
    for (std::size_t d = 1; d <= P; ++d) widest = std::max(widest, mpz_sizeinbase(c[d].get_mpz_t(), 10));
    digits10 = static_cast<unsigned>(widest + 40);
  }
  const unsigned saved = mpfr_float::default_precision();
  mpfr_float::default_precision(digits10);

  const u64 mag = params.delta.magnitude();
  const mpfr_float two_pi = 2 * boost::math::constants::pi<mpfr_float>();
  // roots[j] = e(j / |D|)
  std::vector<mpfr_float> root_re(mag), root_im(mag);
  for (u64 j = 0; j < mag; ++j) {
    mpfr_float angle = two_pi * mpfr_float(j) / mpfr_float(mag);
    root_re[j] = cos(angle);
    root_im[j] = sin(angle);
  }
  // sum_s (D/s) e(a s / D), with e(a s / D) = e(-(a s mod |D|) / |D|)
  auto gauss = [&](u64 a, mpfr_float& re, mpfr_float& im) {
    re = 0;
    im = 0;
    for (u64 s = 0; s < mag; ++s) {
      int chi = params.delta.chi(static_cast<i64>(s));
      if (chi == 0) continue;
      u64 j = (mag - nt::mulmod(a % mag, s, mag)) % mag;
      re += chi * root_re[j];
      im += chi * root_im[j];
    }
  };

  mpfr_float g1_re, g1_im;
  gauss(1, g1_re, g1_im);
  // denominator -c1 G(1, D)
  const mpfr_float den_re = -c1 * g1_re, den_im = -c1 * g1_im;
  const mpfr_float den_norm = den_re * den_re + den_im * den_im;

  std::vector<NumericCoeff> out(P + 1, NumericCoeff{mpfr_float(0), mpfr_float(0)});
  mpfr_float g_re, g_im;
  for (std::size_t n = 1; n <= P; ++n) {
    mpfr_float sum_re = 0, sum_im = 0;
    for (u64 d : nt::divisors(n)) {
      if (c[d] == 0) continue;
      gauss(n / d, g_re, g_im);
      mpfr_float weight = mpfr_float(c[d].get_mpz_t()) * mpfr_float(-static_cast<i64>(d));
      sum_re += weight * g_re;
      sum_im += weight * g_im;
    }
    // (sum) / (den)
    out[n].re = (sum_re * den_re + sum_im * den_im) / den_norm;
    out[n].im = (sum_im * den_re - sum_re * den_im) / den_norm;
  }
  mpfr_float::default_precision(saved);
  return out;
}

/// Hecke eigenvalue data at one prime p, mod ell^R.
struct EigenData {
  CongruenceSetting setting;
  u64 p;
  u64 lambda;

  ModularRing ring() const { return ModularRing(setting.modulus()); }

  /// b(p^j) from b(p^{j+1}) = lambda b(p^j) - p^{k-1} b(p^{j-1}).
  u64 b_power(u64 j) const {
    const ModularRing R = ring();
    const u64 pk = power_of(R, p, setting.k - 1);
    const u64 lam = lambda % R.modulus();
    u64 prev = R.one(), cur = lam;
    if (j == 0) return prev;
    for (u64 i = 1; i < j; ++i) {
      u64 next = R.sub(R.mul(cur, lam), R.mul(pk, prev));
      prev = cur;
      cur = next;
    }
    return cur;
  }
};

/// c(n) mod ell^R from c(1) and the eigen data at every prime of n.
inline u64 predict_c(u64 n, const std::vector<EigenData>& eigen, const TwistParams& params, const mpz_class& c1) {
  if (eigen.empty()) throw Error(ErrorCode::UncoveredPrime, "no eigen data supplied");
  const CongruenceSetting& setting = eigen.front().setting;
  const ModularRing R(setting.modulus());
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  if (nt::gcd(n, 6 * setting.ell) != 1)
    throw Error(ErrorCode::InvalidArgument, "n must be coprime to 6 ell");
  u64 product = R.one();
  for (auto [p, v] : nt::factorize(n)) {
    auto it = std::find_if(eigen.begin(), eigen.end(), [p = p](const EigenData& e) { return e.p == p; });
    if (it == eigen.end()) throw Error(ErrorCode::UncoveredPrime, "no eigen data at p = " + std::to_string(p));
    u64 term = R.sub(it->b_power(v), R.mul(it->b_power(v - 1), R.from_int(params.delta.chi(static_cast<i64>(p)))));
    product = R.mul(product, term);
  }
  u64 inv_n = R.inverse(R.from_int(static_cast<i64>(n % R.modulus())));
  return R.mul(R.mul(R.from_mpz(c1), inv_n), product);
}

/// c(p^M) mod ell^R for a single prime, without forming p^M as a machine integer.
inline u64 predict_c_prime_power(u64 M, const EigenData& eigen, const TwistParams& params, const mpz_class& c1) {
  const ModularRing R(eigen.setting.modulus());
  if (eigen.p == 2 || eigen.p == 3 || eigen.p == eigen.setting.ell)
    throw Error(ErrorCode::InvalidArgument, "p must avoid 2, 3 and ell");
  u64 term = R.sub(eigen.b_power(M), R.mul(eigen.b_power(M - 1), R.from_int(params.delta.chi(static_cast<i64>(eigen.p)))));
  u64 inv = R.inverse(R.pow(eigen.p % R.modulus(), M));
  return R.mul(R.mul(R.from_mpz(c1), inv), term);
}

struct MockPrediction {
  MockFunction function;
  mpz_class index;
  u64 residue;  // mod ell^R
  u64 M;
};

/// a_f or a_omega at the index read by c(p^M), predicted mod ell^R.
inline MockPrediction predict_mock(const TwistParams& params, const EigenData& eigen, u64 M) {
  if (M == 0) throw Error(ErrorCode::InvalidArgument, "M must be positive");
  const ModularRing R(eigen.setting.modulus());
  const u64 p = eigen.p;
  const u64 pM_mod24 = nt::powmod(p, M, 24);
  const DictionaryRule rule = dictionary_rule(params.delta, params.r, pM_mod24);
  if (!rule.source)
    throw Error(ErrorCode::InvalidArgument, "c(p^M) is identically zero for these parameters");
  const mpz_class c1 = exact_c1(params);
  const u64 c = predict_c_prime_power(M, eigen, params, c1);
  mpz_class pM;
  mpz_ui_pow_ui(pM.get_mpz_t(), p, M);
  const u64 mult = R.from_int(rule.multiplier);
  return {*rule.source, dictionary_index(params.delta, *rule.source, pM), R.divide(c, mult), M};
}

/// a_omega(2(p^{2M} - 1)/3) mod ell^R with M = 2m + eps, for (D, r) = (-8, 4).
inline MockPrediction predict_omega(u64 p, u64 m, u64 eps, const EigenData& eigen) {
  if (eps > 1) throw Error(ErrorCode::InvalidArgument, "parity must be 0 or 1");
  if (nt::gcd(p, 6 * eigen.setting.ell) != 1) throw Error(ErrorCode::InvalidArgument, "p must be coprime to 6 ell");
  return predict_mock(TwistParams(-8, 4), eigen, 2 * m + eps);
}

/// a_f((23 p^{2M} + 1)/24) mod ell^R with M = 2m + eps, for (D, r) = (-23, 1).
inline MockPrediction predict_f(u64 p, u64 m, u64 eps, const EigenData& eigen) {
  if (eps > 1) throw Error(ErrorCode::InvalidArgument, "parity must be 0 or 1");
  if (nt::gcd(p, 6 * 23 * eigen.setting.ell) != 1)
    throw Error(ErrorCode::InvalidArgument, "p must be coprime to 6 * 23 * ell");
  return predict_mock(TwistParams(-23, 1), eigen, 2 * m + eps);
}

}  // namespace qmock

#endif  // QMOCK_BORCHERDS_HPP
