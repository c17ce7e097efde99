#ifndef QMOCK_HECKE_HPP
#define QMOCK_HECKE_HPP

// Hecke operators on truncated expansions, Sturm bounds for Gamma_0(N), and
// coefficientwise certification of Phi* | T_{p,k} = lambda Phi* (mod ell^R).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qmock/borcherds.hpp"
#include "qmock/congruence.hpp"
#include "qmock/errors.hpp"
#include "qmock/mocktheta.hpp"
#include "qmock/ntheory.hpp"
#include "qmock/parallel.hpp"
#include "qmock/ring.hpp"
#include "qmock/series.hpp"

namespace qmock {

/// (g | T_{p,k})(n) = a(pn) + p^{k-1} a(n/p), for n < out_prec.
template <class Ring>
Series<Ring> hecke_operator(const Series<Ring>& g, u64 p, u64 k, std::size_t out_prec) {
  if (g.frac24() != 0) throw Error(ErrorCode::FractionalExponent, "T_p needs an integral q-expansion");
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "weight must be positive");
  if (out_prec == 0 || g.prec() < p * out_prec)
    throw Error(ErrorCode::InsufficientPrecision, "T_" + std::to_string(p) + " to q^" + std::to_string(out_prec) +
                                                      " needs " + std::to_string(p * out_prec) + " input terms, have " +
                                                      std::to_string(g.prec()));
  const Ring& ring = g.ring();
  const auto pk = power_of(ring, p, k - 1);
  std::vector<typename Ring::value_type> out(out_prec, ring.zero());
  for (std::size_t n = 0; n < out_prec; ++n) {
    out[n] = g[p * n];
    if (n % p == 0) ring.add_mul(out[n], pk, g[n / p]);
  }
  return Series<Ring>(ring, std::move(out));
}

/// Output precision floor(P_in / p).
template <class Ring>
Series<Ring> hecke_operator(const Series<Ring>& g, u64 p, u64 k) {
  return hecke_operator(g, p, k, g.prec() / p);
}

/// [SL_2(Z) : Gamma_0(N)] = N prod_{p | N} (1 + 1/p).
inline u64 index_gamma0(u64 N) {
  if (N == 0) throw Error(ErrorCode::InvalidArgument, "level must be positive");
  u64 index = N;
  for (auto [p, e] : nt::factorize(N)) index = index / p * (p + 1);
  return index;
}

/// floor(k [SL_2(Z) : Gamma_0(N)] / 24).
inline u64 sturm_bound(u64 k, u64 N) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "weight must be positive");
  return k * index_gamma0(N) / 24;
}

inline constexpr u64 kPhiLevel = 6;

struct HeckeCheckReport {
  u64 p = 0;
  u64 lambda = 0;
  u64 modulus = 0;
  CongruenceSetting setting{};
  std::size_t requested_prec = 0;
  i64 verified_prec = -1;  // all coefficients of q^0..q^verified_prec agree
  std::optional<std::size_t> first_failure;
  bool certified = false;
  u64 sturm = 0;
  bool sturm_met = false;
  TableDepth table_depth;  // a_omega / a_f depth consumed to build Phi*

  /// Certified to at least the Sturm bound; a proof only under the pole-count hypothesis B.
  bool sturm_complete() const { return certified && sturm_met; }
};

inline void require_eigencheck_inputs(const TwistParams& params, const CongruenceSetting& setting, u64 p) {
  if (!nt::is_prime(p)) throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
  if (p == 2 || p == 3 || p == setting.ell)
    throw Error(ErrorCode::InvalidArgument, "p must avoid 2, 3 and ell");
  if (nt::splitting_type(setting.ell, params.delta) == SplittingType::split)
    throw Error(ErrorCode::InvalidArgument, "ell = " + std::to_string(setting.ell) + " splits in Q(sqrt(" +
                                                std::to_string(params.delta.value()) + "))");
}

/// Checks phi | T_{p,k} - lambda phi = 0 on q^0..q^P for an already built expansion.
inline HeckeCheckReport eigencheck_series(const ModSeries& phi, const CongruenceSetting& setting, u64 p, u64 lambda,
                                          std::size_t P) {
  const ModularRing& ring = phi.ring();
  HeckeCheckReport report;
  report.p = p;
  report.lambda = lambda % ring.modulus();
  report.modulus = ring.modulus();
  report.setting = setting;
  report.requested_prec = P;
  report.sturm = sturm_bound(setting.k, kPhiLevel);
  report.sturm_met = P >= report.sturm;

  const ModSeries image = hecke_operator(phi, p, setting.k, P + 1);
  for (std::size_t n = 0; n <= P; ++n) {
    const u64 residual = ring.sub(image[n], ring.mul(report.lambda, phi[n]));
    if (residual != 0) {
      report.first_failure = n;
      break;
    }
  }
  report.verified_prec = report.first_failure ? static_cast<i64>(*report.first_failure) - 1 : static_cast<i64>(P);
  report.certified = !report.first_failure && report.verified_prec >= static_cast<i64>(P);
  return report;
}

/// Number of Phi* coefficients an eigencheck at prime p and precision P reads.
inline std::size_t eigencheck_phi_prec(u64 p, std::size_t P) { return p * (P + 1) - 1; }

/// Builds Phi* mod ell^R deep enough for T_p to q^P and checks the eigen relation.
inline HeckeCheckReport eigencheck(const TwistParams& params, const CongruenceSetting& setting, u64 p, u64 lambda,
                                   std::size_t P, MockTables<ModularRing>& tables) {
  require_eigencheck_inputs(params, setting, p);
  if (tables.ring().modulus() != setting.modulus())
    throw Error(ErrorCode::RingMismatch, "tables must be reduced mod ell^R");
  const std::size_t depth = eigencheck_phi_prec(p, P);
  const auto phi = phi_star(params, depth, tables);
  auto report = eigencheck_series(phi.series, setting, p, lambda, P);
  report.table_depth = required_depth(params.delta, params.r, depth);
  return report;
}

enum class EigenClass { zero, two, coefficient, other };

constexpr const char* to_string(EigenClass c) noexcept {
  switch (c) {
    case EigenClass::zero: return "0";
    case EigenClass::two: return "2";
    case EigenClass::coefficient: return "b(p)";
    case EigenClass::other: return "other";
  }
  return "?";
}

struct ScanRow {
  u64 p;
  EigenClass classification;
  u64 b_p;                                   // b(p) mod ell^R
  std::optional<std::size_t> first_failure;  // of the lambda = b(p) check, when classified other
};

/// Classifies each prime 5 <= p <= bound (p != ell) by the eigenvalue it certifies with.
inline std::vector<ScanRow> density_scan(const TwistParams& params, const CongruenceSetting& setting, u64 prime_bound,
                                         std::size_t P, MockTables<ModularRing>& tables) {
  std::vector<u64> primes;
  for (u64 p : nt::primes_up_to(prime_bound))
    if (p != 2 && p != 3 && p != setting.ell) primes.push_back(p);
  if (primes.empty()) return {};
  for (u64 p : primes) require_eigencheck_inputs(params, setting, p);

  // one shared expansion deep enough for the largest prime
  const auto phi = phi_star(params, eigencheck_phi_prec(primes.back(), P), tables);
  std::vector<ScanRow> rows(primes.size());
  parallel::for_chunks(0, primes.size(), 1, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const u64 p = primes[i];
      const u64 bp = phi.b(p);
      ScanRow row{p, EigenClass::other, bp, std::nullopt};
      if (eigencheck_series(phi.series, setting, p, 0, P).certified) {
        row.classification = EigenClass::zero;
      } else if (eigencheck_series(phi.series, setting, p, 2, P).certified) {
        row.classification = EigenClass::two;
      } else {
        auto r = eigencheck_series(phi.series, setting, p, bp, P);
        if (r.certified) row.classification = EigenClass::coefficient;
        else row.first_failure = r.first_failure;
      }
      rows[i] = row;
    }
  });
  return rows;
}

struct MultiplicativityResult {
  bool ok = true;
  std::vector<u64> eigen_primes;  // primes at which phi certified as an eigenform of T_p (U_p for p | 6)
  std::optional<std::pair<u64, u64>> counterexample;  // (m, n) with b(m) b(n) != b(mn), or (p, j) for the recursion
  std::string failed_relation;
};

/// Checks phi | U_p = b(p) phi on q^1..q^P, i.e. b(pn) = b(p) b(n).
inline bool u_eigen(const PhiStar<ModularRing>& phi, u64 p, std::size_t P) {
  const ModularRing& ring = phi.series.ring();
  for (std::size_t n = 1; n <= P; ++n)
    if (phi.b(p * n) != ring.mul(phi.b(p), phi.b(n))) return false;
  return true;
}

/// Eigen primes p <= factor_bound, then b(m) b(n) = b(mn) for coprime m, n <= factor_bound
/// supported on them, and the prime-power recursion up to index recursion_bound:
/// b(p) b(p^j) = b(p^{j+1}) + p^{k-1} b(p^{j-1}), with the p^{k-1} term absent at p | 6.
inline MultiplicativityResult multiplicativity_check(const PhiStar<ModularRing>& phi, const CongruenceSetting& setting,
                                                     std::size_t factor_bound, std::size_t recursion_bound) {
  const ModularRing& ring = phi.series.ring();
  const std::size_t needed = std::max<std::size_t>(factor_bound * factor_bound, recursion_bound);
  if (phi.prec() < needed)
    throw Error(ErrorCode::InsufficientPrecision,
                "multiplicativity to " + std::to_string(needed) + " needs phi to that index, have " +
                    std::to_string(phi.prec()));
  MultiplicativityResult result;
  const u64 sturm = sturm_bound(setting.k, kPhiLevel);
  const u64 prime_bound = std::max(factor_bound, recursion_bound);
  for (u64 p : nt::primes_up_to(prime_bound)) {
    // Sturm-length check when phi is deep enough, else as far as phi reaches
    const std::size_t reach = (phi.prec() + 1) / p - 1;
    const std::size_t P = std::min<std::size_t>(reach, std::max<std::size_t>(sturm, factor_bound));
    if (P < sturm) continue;
    const bool eigen = kPhiLevel % p == 0 ? u_eigen(phi, p, P)
                                          : eigencheck_series(phi.series, setting, p, phi.b(p), P).certified;
    if (eigen) result.eigen_primes.push_back(p);
  }

  auto supported = [&](u64 n) {
    for (auto [p, e] : nt::factorize(n))
      if (!std::binary_search(result.eigen_primes.begin(), result.eigen_primes.end(), p)) return false;
    return true;
  };
  for (u64 m = 2; m <= factor_bound; ++m) {
    if (!supported(m)) continue;
    for (u64 n = m + 1; n <= factor_bound; ++n) {
      if (nt::gcd(m, n) != 1 || !supported(n)) continue;
      if (ring.mul(phi.b(m), phi.b(n)) != phi.b(m * n)) {
        result.ok = false;
        result.counterexample = std::pair{m, n};
        result.failed_relation = "b(m) b(n) = b(mn)";
        return result;
      }
    }
  }
  for (u64 p : result.eigen_primes) {
    const u64 pk = kPhiLevel % p == 0 ? 0 : power_of(ring, p, setting.k - 1);
    for (u64 j = 1, pj = p; pj * p <= recursion_bound; ++j, pj *= p) {
      const u64 lhs = ring.mul(phi.b(p), phi.b(pj));
      const u64 rhs = ring.add(phi.b(pj * p), ring.mul(pk, phi.b(pj / p)));
      if (lhs != rhs) {
        result.ok = false;
        result.counterexample = std::pair{p, j};
        result.failed_relation = "b(p) b(p^j) = b(p^{j+1}) + p^{k-1} b(p^{j-1})";
        return result;
      }
    }
  }
  return result;
}

}  // namespace qmock

#endif  // QMOCK_HECKE_HPP
