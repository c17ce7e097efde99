#ifndef QMOCK_MOCKTHETA_HPP
#define QMOCK_MOCKTHETA_HPP

// Coefficients of Ramanujan's third-order mock theta functions
//
//   omega(q) = sum_n q^{2n(n+1)} / ((1-q)^2 (1-q^3)^2 ... (1-q^{2n+1})^2)
//   f(q)     = sum_n q^{n^2}     / ((1+q)^2 (1+q^2)^2 ... (1+q^n)^2)
//
// and the dictionary c+(|D| d^2/24, r d/12) expressing the holomorphic
// coefficients of the associated vector-valued Maass form through a_f, a_omega.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmock/errors.hpp"
#include "qmock/ntheory.hpp"
#include "qmock/ring.hpp"
#include "qmock/series.hpp"

namespace qmock {

enum class MockFunction { f, omega };

constexpr const char* to_string(MockFunction w) noexcept { return w == MockFunction::f ? "f" : "omega"; }

template <class Ring>
struct MockCoeffTable {
  MockFunction which;
  Ring ring;
  std::vector<typename Ring::value_type> values;  // a(0..upto)

  std::size_t upto() const noexcept { return values.empty() ? 0 : values.size() - 1; }
  const typename Ring::value_type& operator[](std::size_t n) const { return values.at(n); }
};

namespace detail {

// Shared driver: acc += q^{e(n)} * Pi_n where Pi_n = Pi_{n-1} * (1 - sign q^{step(n)})^{-2}.
// Pi is only ever needed on the first N - e(n) + 1 entries, which shrink with n.
template <class Ring, class Exponent, class Step>
std::vector<typename Ring::value_type> accumulate_mock(std::size_t N, const Ring& ring, std::size_t first_n,
                                                       Exponent exponent, Step step, int sign) {
  std::vector<typename Ring::value_type> acc(N + 1, ring.zero());
  std::vector<typename Ring::value_type> pi(N + 1, ring.zero());
  pi[0] = ring.one();
  if (first_n == 1) acc[0] = ring.one();  // the n = 0 summand of f is 1
  for (std::size_t n = first_n;; ++n) {
    const std::size_t e = exponent(n);
    if (e > N) break;
    std::span<typename Ring::value_type> live(pi.data(), N - e + 1);
    binomial_inverse_pass(ring, live, step(n), sign);
    binomial_inverse_pass(ring, live, step(n), sign);
    accumulate_into(ring, acc.data() + e, std::span<const typename Ring::value_type>(live));
  }
  return acc;
}

// The same recurrence on residues held in a narrow word type W. The passes are
// memory-bound, so small moduli run several times faster in u8 / u16 storage.
template <class W, class Exponent, class Step>
std::vector<u64> accumulate_mock_words(std::size_t N, u64 modulus, std::size_t first_n, Exponent exponent, Step step,
                                       int sign) {
  const W m = static_cast<W>(modulus);
  std::vector<W> acc(N + 1, 0), pi(N + 1, 0);
  pi[0] = 1 % m;
  if (first_n == 1) acc[0] = 1 % m;
  for (std::size_t n = first_n;; ++n) {
    const std::size_t e = exponent(n);
    if (e > N) break;
    std::span<W> live(pi.data(), N - e + 1);
    binomial_inverse_pass_words<W>(m, live, step(n), sign);
    binomial_inverse_pass_words<W>(m, live, step(n), sign);
    accumulate_words<W>(m, acc.data() + e, live.data(), live.size());
  }
  return std::vector<u64>(acc.begin(), acc.end());
}

template <class Exponent, class Step>
std::vector<u64> accumulate_mock(std::size_t N, const ModularRing& ring, std::size_t first_n, Exponent exponent,
                                 Step step, int sign) {
  const u64 m = ring.modulus();
  if (m < (u64{1} << 7)) return accumulate_mock_words<std::uint8_t>(N, m, first_n, exponent, step, sign);
  if (m < (u64{1} << 15)) return accumulate_mock_words<std::uint16_t>(N, m, first_n, exponent, step, sign);
  if (m < (u64{1} << 31)) return accumulate_mock_words<std::uint32_t>(N, m, first_n, exponent, step, sign);
  return accumulate_mock_words<u64>(N, m, first_n, exponent, step, sign);
}

}  // namespace detail

/// a_omega(0..N).
template <class Ring>
MockCoeffTable<Ring> omega_coeffs(std::size_t N, const Ring& ring) {
  auto values = detail::accumulate_mock(
      N, ring, 0, [](std::size_t n) { return 2 * n * (n + 1); }, [](std::size_t n) { return 2 * n + 1; }, +1);
  return {MockFunction::omega, ring, std::move(values)};
}

/// a_f(0..N).
template <class Ring>
MockCoeffTable<Ring> f_coeffs(std::size_t N, const Ring& ring) {
  auto values = detail::accumulate_mock(
      N, ring, 1, [](std::size_t n) { return n * n; }, [](std::size_t n) { return n; }, -1);
  return {MockFunction::f, ring, std::move(values)};
}

/// Coefficient tables grown on demand. Not thread-safe while growing.
template <class Ring>
class MockTables {
 public:
  explicit MockTables(Ring ring) : ring_(std::move(ring)) {}

  const Ring& ring() const noexcept { return ring_; }

  const MockCoeffTable<Ring>& omega(std::size_t upto) { return ensure(omega_, MockFunction::omega, upto); }
  const MockCoeffTable<Ring>& f(std::size_t upto) { return ensure(f_, MockFunction::f, upto); }

  /// Installs a precomputed table (e.g. loaded from a cache).
  void install(MockCoeffTable<Ring> table) {
    if (!(table.ring == ring_)) throw Error(ErrorCode::RingMismatch, "installed table has a different ring");
    (table.which == MockFunction::f ? f_ : omega_) = std::move(table);
  }

  std::size_t omega_depth() const noexcept { return omega_ ? omega_->upto() : 0; }
  std::size_t f_depth() const noexcept { return f_ ? f_->upto() : 0; }
  bool has(MockFunction w) const noexcept { return w == MockFunction::f ? f_.has_value() : omega_.has_value(); }

 private:
  const MockCoeffTable<Ring>& ensure(std::optional<MockCoeffTable<Ring>>& slot, MockFunction which,
                                     std::size_t upto) {
    if (!slot || slot->upto() < upto)
      slot = which == MockFunction::f ? f_coeffs(upto, ring_) : omega_coeffs(upto, ring_);
    return *slot;
  }

  Ring ring_;
  std::optional<MockCoeffTable<Ring>> omega_;
  std::optional<MockCoeffTable<Ring>> f_;
};

struct CPlusQuery {
  Discriminant delta;
  i64 r;
  u64 d;
};

/// Which mock coefficient a dictionary entry reads, and with what multiplier.
struct CPlusEntry {
  std::optional<MockFunction> source;  // empty: the entry vanishes
  u64 index = 0;
  int multiplier = 0;  // value = multiplier * a_source(index)
};

inline void require_twist(const Discriminant& delta, i64 r) {
  if (nt::mod_floor(delta.value() - r * r, 24) != 0)
    throw Error(ErrorCode::InvalidArgument, "need delta = r^2 (mod 24), got delta = " +
                                                std::to_string(delta.value()) + ", r = " + std::to_string(r));
}

/// The part of the dictionary that depends only on d mod 24: which function
/// c+(|D| d^2/24, r d/12) reads and the signed multiplier in front of it.
struct DictionaryRule {
  std::optional<MockFunction> source;  // empty: the entry vanishes
  int multiplier = 0;
};

inline DictionaryRule dictionary_rule(const Discriminant& delta, i64 r, u64 d_mod_24) {
  require_twist(delta, r);
  const u64 key = nt::mod_floor(r * static_cast<i64>(d_mod_24 % 12), 12);
  const u64 scaled = delta.magnitude() % 24 * (d_mod_24 * d_mod_24 % 24) % 24;  // |D| d^2 mod 24
  switch (key) {
    case 0: case 3: case 6: case 9:
      return {};
    case 1: case 5: case 7: case 11:
      if ((scaled + 1) % 24 != 0) throw Error(ErrorCode::IndexNotIntegral, "a_f index is not an integer");
      return {MockFunction::f, (key == 1 || key == 7) ? 1 : -1};
    default: {
      // keys 2, 10: 2((-1)^x - 1) a_omega(x);  keys 4, 8: -2((-1)^x + 1) a_omega(x);  x = 2(m - 1/3)
      if ((scaled + 24 - 8) % 12 != 0) throw Error(ErrorCode::IndexNotIntegral, "a_omega index is not an integer");
      const int parity = ((scaled + 24 - 8) % 24 == 0) ? 1 : -1;  // (-1)^x
      int factor = (key == 2 || key == 10) ? 2 * (parity - 1) : -2 * (parity + 1);
      if (key == 10 || key == 8) factor = -factor;
      if (factor == 0) return {};
      return {MockFunction::omega, factor};
    }
  }
}

/// Index into a_f or a_omega read by c(d), as an exact integer.
inline mpz_class dictionary_index(const Discriminant& delta, MockFunction source, const mpz_class& d) {
  mpz_class scaled = mpz_class(static_cast<unsigned long>(delta.magnitude())) * d * d;
  if (source == MockFunction::f) return (scaled + 1) / 24;
  if (scaled < 8) throw Error(ErrorCode::IndexNotIntegral, "a_omega index is negative");
  return (scaled - 8) / 12;
}

/// Resolves c+(|D| d^2 / 24, r d/12) to a signed multiple of a_f or a_omega.
inline CPlusEntry c_plus_entry(const CPlusQuery& q) {
  if (q.d == 0) throw Error(ErrorCode::InvalidArgument, "d must be positive");
  const DictionaryRule rule = dictionary_rule(q.delta, q.r, q.d % 24);
  CPlusEntry out;
  if (!rule.source) return out;
  const u128 scaled = static_cast<u128>(q.delta.magnitude()) * q.d * q.d;
  out.source = rule.source;
  out.multiplier = rule.multiplier;
  out.index = static_cast<u64>(*rule.source == MockFunction::f ? (scaled + 1) / 24 : (scaled - 8) / 12);
  return out;
}

/// Deepest a_omega / a_f indices needed for c(1..D).
struct TableDepth {
  u64 omega = 0;
  u64 f = 0;
};

inline TableDepth required_depth(const Discriminant& delta, i64 r, u64 D) {
  TableDepth depth;
  for (u64 d = 1; d <= D; ++d) {
    auto e = c_plus_entry({delta, r, d});
    if (!e.source) continue;
    auto& slot = *e.source == MockFunction::f ? depth.f : depth.omega;
    slot = std::max(slot, e.index);
  }
  return depth;
}

template <class Ring>
typename Ring::value_type c_plus(const CPlusQuery& q, MockTables<Ring>& tables) {
  const Ring& ring = tables.ring();
  auto e = c_plus_entry(q);
  if (!e.source) return ring.zero();
  const auto& table = *e.source == MockFunction::f ? tables.f(e.index) : tables.omega(e.index);
  return ring.mul(ring.from_int(e.multiplier), table[e.index]);
}

/// c(d) = c+(|D| d^2/24, r d/12) for d = 1..D; element 0 is unused and zero.
template <class Ring>
std::vector<typename Ring::value_type> c_series(const Discriminant& delta, i64 r, u64 D, MockTables<Ring>& tables) {
  const Ring& ring = tables.ring();
  const TableDepth depth = required_depth(delta, r, D);
  if (depth.omega > 0) tables.omega(depth.omega);
  if (depth.f > 0) tables.f(depth.f);
  std::vector<typename Ring::value_type> c(D + 1, ring.zero());
  for (u64 d = 1; d <= D; ++d) c[d] = c_plus<Ring>({delta, r, d}, tables);
  return c;
}

}  // namespace qmock

#endif  // QMOCK_MOCKTHETA_HPP
