#ifndef QMOCK_CONGRUENCE_HPP
#define QMOCK_CONGRUENCE_HPP

#include <string>

#include "qmock/errors.hpp"
#include "qmock/ntheory.hpp"

namespace qmock {

/// 2 + (ell - 1) B R: weight of the holomorphic form congruent to Phi* mod ell^R
/// after clearing B simple poles with powers of a lift of the Hasse invariant.
inline u64 hasse_weight(u64 ell, u64 B, u64 R) {
  if (!nt::is_prime(ell)) throw Error(ErrorCode::InvalidArgument, std::to_string(ell) + " is not prime");
  if (ell < 5) throw Error(ErrorCode::SmallPrime, "the Hasse invariant lifts to E_{l-1} only for l >= 5");
  return 2 + (ell - 1) * B * R;
}

/// Prime ell, exponent R, pole count B and the derived weight k.
struct CongruenceSetting {
  u64 ell;
  u64 R;
  u64 B;
  u64 k;

  static CongruenceSetting make(u64 ell, u64 R, u64 B) {
    if (R == 0) throw Error(ErrorCode::InvalidArgument, "R must be positive");
    return {ell, R, B, hasse_weight(ell, B, R)};
  }

  u64 modulus() const {
    u64 m = 1;
    for (u64 i = 0; i < R; ++i) {
      if (m > (u64{1} << 62) / ell) throw Error(ErrorCode::InvalidArgument, "ell^R does not fit a machine word");
      m *= ell;
    }
    return m;
  }
};

}  // namespace qmock

#endif  // QMOCK_CONGRUENCE_HPP
