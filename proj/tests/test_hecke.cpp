#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qmock/hecke.hpp"

using namespace qmock;

namespace {

const IntegerRing Z;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::InvalidArgument;
}

// Delta = q prod (1 - q^n)^24 via the naive product
ExactSeries delta_series(std::size_t prec) {
  auto e = oracle::euler_product(1, prec);
  oracle::Poly p(prec, 0);
  p[0] = 1;
  for (int i = 0; i < 24; ++i) p = oracle::mul(p, e, prec);
  std::vector<mpz_class> c(prec, 0);
  for (std::size_t n = 1; n < prec; ++n) c[n] = p[n - 1];
  return ExactSeries(Z, std::move(c));
}

ExactSeries random_series(std::mt19937_64& rng, std::size_t prec) {
  std::vector<mpz_class> c(prec);
  for (auto& x : c) x = static_cast<long>(rng() % 2001) - 1000;
  return ExactSeries(Z, std::move(c));
}

const TwistParams kD8(-8, 4);

}  // namespace

TEST(HeckeOperator, DeltaIsEigen) {
  auto d = delta_series(400);
  for (auto [p, tau_p] : {std::pair<u64, long>{2, -24}, {3, 252}, {5, 4830}, {7, -16744}}) {
    auto image = hecke_operator(d, p, 12);
    EXPECT_EQ(image, truncate(scale(mpz_class(tau_p), d), image.prec())) << p;
  }
}

TEST(HeckeOperator, Examples) {
  auto g = ExactSeries::from_ints(Z, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  auto t2 = hecke_operator(g, 2, 3);
  // a(2n) + 4 a(n/2)
  EXPECT_EQ(t2, ExactSeries::from_ints(Z, {5, 3, 13, 7, 21}));
  EXPECT_EQ(hecke_operator(g, 3, 1, 2), ExactSeries::from_ints(Z, {2, 4}));
  EXPECT_EQ(code_of([&] { hecke_operator(g, 5, 2, 3); }), ErrorCode::InsufficientPrecision);
  EXPECT_EQ(code_of([&] { hecke_operator(g, 2, 0, 3); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { hecke_operator(eta_product(1, 20, Z), 2, 2, 3); }), ErrorCode::FractionalExponent);
}

TEST(HeckeOperator, Linear) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    auto a = random_series(rng, 120), b = random_series(rng, 120);
    for (u64 p : {2u, 5u, 7u}) {
      const mpz_class c = static_cast<long>(rng() % 19) - 9;
      EXPECT_EQ(hecke_operator(add(scale(c, a), b), p, 4), add(scale(c, hecke_operator(a, p, 4)), hecke_operator(b, p, 4)));
    }
  }
}

TEST(HeckeOperator, DistinctPrimesCommute) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    auto g = random_series(rng, 300);
    for (auto [p, q] : {std::pair<u64, u64>{2, 3}, {5, 7}, {3, 11}}) {
      const std::size_t out = 300 / (p * q);
      auto pq = hecke_operator(hecke_operator(g, q, 6, out * p), p, 6, out);
      auto qp = hecke_operator(hecke_operator(g, p, 6, out * q), q, 6, out);
      EXPECT_EQ(pq, qp) << p << " " << q;
    }
  }
}

TEST(HeckeOperator, ModularMatchesExact) {
  std::mt19937_64 rng(8);
  auto g = random_series(rng, 200);
  for (u64 m : {23ull, 529ull})
    EXPECT_EQ(hecke_operator(reduce_mod(g, m), 5, 46), reduce_mod(hecke_operator(g, 5, 46), m)) << m;
}

TEST(Sturm, IndexAndBound) {
  EXPECT_EQ(index_gamma0(6), 12u);
  EXPECT_EQ(index_gamma0(1), 1u);
  EXPECT_EQ(index_gamma0(4), 6u);
  EXPECT_EQ(index_gamma0(23), 24u);
  EXPECT_EQ(sturm_bound(46, 6), 23u);
  EXPECT_EQ(sturm_bound(10, 6), 5u);
  EXPECT_EQ(sturm_bound(24, 1), 1u);
  EXPECT_THROW(sturm_bound(0, 6), Error);
  EXPECT_THROW(index_gamma0(0), Error);
}

TEST(Sturm, MonotoneInWeightAndLevel) {
  for (u64 N = 1; N <= 60; ++N)
    for (u64 k = 1; k < 80; ++k) {
      ASSERT_LE(sturm_bound(k, N), sturm_bound(k + 1, N));
      ASSERT_LE(sturm_bound(k, N), sturm_bound(k, N * 2));
    }
}

TEST(HasseWeight, Examples) {
  EXPECT_EQ(hasse_weight(23, 2, 1), 46u);
  EXPECT_EQ(hasse_weight(5, 2, 1), 10u);
  EXPECT_EQ(hasse_weight(23, 0, 1), 2u);
  EXPECT_EQ(hasse_weight(11, 1, 2), 22u);
  EXPECT_EQ(code_of([] { hasse_weight(3, 1, 1); }), ErrorCode::SmallPrime);
  EXPECT_EQ(code_of([] { hasse_weight(2, 1, 1); }), ErrorCode::SmallPrime);
  EXPECT_EQ(code_of([] { hasse_weight(9, 1, 1); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(CongruenceSetting::make(23, 2, 1).modulus(), 529u);
}

TEST(Eigencheck, CertifiesAtFiveModTwentyThree) {
  const auto s = CongruenceSetting::make(23, 1, 2);
  MockTables<ModularRing> t{ModularRing(23)};
  auto r = eigencheck(kD8, s, 5, 0, 50, t);
  EXPECT_TRUE(r.certified);
  EXPECT_EQ(r.verified_prec, 50);
  EXPECT_FALSE(r.first_failure);
  EXPECT_EQ(r.sturm, 23u);
  EXPECT_TRUE(r.sturm_met);
  EXPECT_TRUE(r.sturm_complete());
  EXPECT_EQ(r.table_depth.omega, (8ull * 254 * 254 - 8) / 12);

  auto at_sturm = eigencheck(kD8, s, 5, 0, 23, t);
  EXPECT_TRUE(at_sturm.sturm_complete());
  auto short_check = eigencheck(kD8, s, 5, 0, 10, t);
  EXPECT_TRUE(short_check.certified);
  EXPECT_FALSE(short_check.sturm_complete());
}

TEST(Eigencheck, WrongEigenvalueFails) {
  const auto s = CongruenceSetting::make(23, 1, 2);
  MockTables<ModularRing> t{ModularRing(23)};
  auto r = eigencheck(kD8, s, 5, 1, 50, t);
  EXPECT_FALSE(r.certified);
  ASSERT_TRUE(r.first_failure);
  EXPECT_EQ(*r.first_failure, 1u);
  EXPECT_EQ(r.verified_prec, 0);
  // a non-eigen prime
  EXPECT_FALSE(eigencheck(kD8, s, 7, 0, 30, t).certified);
}

TEST(Eigencheck, SelfConsistentWithCoefficient) {
  // if phi | T_p = lambda phi then lambda = b(p), since b(1) = 1
  const auto s = CongruenceSetting::make(5, 1, 2);
  MockTables<ModularRing> t{ModularRing(5)};
  const auto phi = phi_star(kD8, 700, t);
  for (u64 p : {7u, 11u, 13u, 17u, 19u}) {
    const u64 bp = phi.b(p);
    auto r = eigencheck_series(phi.series, s, p, bp, 30);
    if (!r.certified) continue;
    for (u64 lam = 0; lam < 5; ++lam)
      if (lam != bp) {
        EXPECT_FALSE(eigencheck_series(phi.series, s, p, lam, 30).certified) << p << " " << lam;
      }
  }
}

TEST(Eigencheck, DetectsPerturbationOfReadCoefficients) {
  // T_5 to q^50 reads b(5n) for n <= 50 and b(j) for j <= 10
  const auto s = CongruenceSetting::make(23, 1, 2);
  MockTables<ModularRing> t{ModularRing(23)};
  const auto phi = phi_star(kD8, eigencheck_phi_prec(5, 50), t);
  ASSERT_TRUE(eigencheck_series(phi.series, s, 5, 0, 50).certified);
  std::vector<std::size_t> read;
  for (std::size_t n = 0; n <= 50; ++n) read.push_back(5 * n);
  for (std::size_t j = 1; j <= 10; ++j) read.push_back(j);
  for (std::size_t idx : read) {
    auto c = phi.series.coeffs();
    for (u64 delta : {1u, 7u, 22u}) {
      auto flipped = c;
      flipped[idx] = (flipped[idx] + delta) % 23;
      ModSeries bad(phi.series.ring(), std::move(flipped));
      EXPECT_FALSE(eigencheck_series(bad, s, 5, 0, 50).certified) << idx << " " << delta;
    }
  }
}

TEST(Eigencheck, RejectsInvalidInputs) {
  const auto s = CongruenceSetting::make(23, 1, 2);
  MockTables<ModularRing> t{ModularRing(23)};
  EXPECT_EQ(code_of([&] { eigencheck(kD8, s, 2, 0, 10, t); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { eigencheck(kD8, s, 3, 0, 10, t); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { eigencheck(kD8, s, 23, 0, 10, t); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { eigencheck(kD8, s, 9, 0, 10, t); }), ErrorCode::InvalidArgument);
  // ell = 11 splits in Q(sqrt(-8))
  const auto split = CongruenceSetting::make(11, 1, 1);
  MockTables<ModularRing> t11{ModularRing(11)};
  EXPECT_EQ(nt::splitting_type(11, kD8.delta), SplittingType::split);
  EXPECT_EQ(code_of([&] { eigencheck(kD8, split, 5, 0, 10, t11); }), ErrorCode::InvalidArgument);
  MockTables<ModularRing> wrong{ModularRing(5)};
  EXPECT_EQ(code_of([&] { eigencheck(kD8, s, 5, 0, 10, wrong); }), ErrorCode::RingMismatch);
}

TEST(DensityScan, ModTwentyThree) {
  const auto s = CongruenceSetting::make(23, 1, 2);
  MockTables<ModularRing> t{ModularRing(23)};
  auto rows = density_scan(kD8, s, 30, 23, t);
  std::vector<u64> primes;
  for (const auto& r : rows) primes.push_back(r.p);
  EXPECT_EQ(primes, (std::vector<u64>{5, 7, 11, 13, 17, 19, 29}));
  for (const auto& r : rows) {
    if (r.p == 5) EXPECT_EQ(r.classification, EigenClass::zero);
    else if (r.p == 19) EXPECT_EQ(r.classification, EigenClass::two);
    else {
      EXPECT_EQ(r.classification, EigenClass::other) << r.p;
      ASSERT_TRUE(r.first_failure);
      EXPECT_EQ(*r.first_failure, 2u) << r.p;
    }
  }
  EXPECT_TRUE(density_scan(kD8, s, 3, 23, t).empty());
  EXPECT_STREQ(to_string(EigenClass::coefficient), "b(p)");
}

TEST(DensityScan, ModFiveEveryPrimeIsEigen) {
  const auto s = CongruenceSetting::make(5, 1, 2);
  MockTables<ModularRing> t{ModularRing(5)};
  auto rows = density_scan(kD8, s, 60, 10, t);
  EXPECT_EQ(rows.size(), 14u);
  for (const auto& r : rows) EXPECT_NE(r.classification, EigenClass::other) << r.p;
}

TEST(Multiplicativity, ModFiveSmallBounds) {
  const auto s = CongruenceSetting::make(5, 1, 2);
  MockTables<ModularRing> t{ModularRing(5)};
  const auto phi = phi_star(kD8, 400, t);
  auto res = multiplicativity_check(phi, s, 20, 200);
  EXPECT_TRUE(res.ok) << res.failed_relation;
  EXPECT_FALSE(res.eigen_primes.empty());
  EXPECT_EQ(res.eigen_primes.front(), 2u);
  EXPECT_EQ(code_of([&] { multiplicativity_check(phi, s, 21, 200); }), ErrorCode::InsufficientPrecision);
}

TEST(Multiplicativity, DetectsBrokenRecursion) {
  // b(125) is not read by the T_5 check to q^20, only by the recursion
  const auto s = CongruenceSetting::make(5, 1, 2);
  MockTables<ModularRing> t{ModularRing(5)};
  auto phi = phi_star(kD8, 400, t);
  auto c = phi.series.coeffs();
  c[125] = (c[125] + 1) % 5;
  PhiStar<ModularRing> bad{phi.params, ModSeries(phi.series.ring(), std::move(c)), phi.c1};
  auto res = multiplicativity_check(bad, s, 20, 200);
  EXPECT_FALSE(res.ok);
  ASSERT_TRUE(res.counterexample);
  EXPECT_EQ(*res.counterexample, (std::pair<u64, u64>{5, 2}));
}
