#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "oracles.hpp"
#include "qmock/mocktheta.hpp"

using namespace qmock;

namespace {

const IntegerRing Z;

std::vector<mpz_class> ints(std::initializer_list<long> v) { return {v.begin(), v.end()}; }

std::vector<i64> fundamental_negative(i64 lo) {
  std::vector<i64> out;
  for (i64 d = -3; d >= lo; --d)
    if (nt::is_fundamental_discriminant(d)) out.push_back(d);
  return out;
}

}  // namespace

TEST(Omega, PrintedExpansion) {
  EXPECT_EQ(omega_coeffs(11, Z).values, ints({1, 2, 3, 4, 6, 8, 10, 14, 18, 22, 29, 36}));
}

TEST(Omega, TableValues) {
  auto t = omega_coeffs(416, Z);
  EXPECT_EQ(t[16], 101);
  EXPECT_EQ(t[416], mpz_class("147019574355949"));
}

TEST(Omega, MatchesTermByTermExpansion) {
  auto expect = oracle::omega(300);
  EXPECT_EQ(omega_coeffs(299, Z).values, expect);
}

TEST(Omega, ModularMatchesExactReduction) {
  auto exact = omega_coeffs(2000, Z);
  for (u64 m : {5ull, 23ull, 529ull, 40000ull, 3000000000ull, (1ull << 61) - 1}) {
    auto mod = omega_coeffs(2000, ModularRing(m));
    for (std::size_t n = 0; n <= 2000; ++n) {
      mpz_class r = exact[n] % m;
      ASSERT_EQ(mod[n], r.get_ui()) << m << " " << n;
    }
  }
}

TEST(Omega, LargeTableWithinBudget) {
  const auto start = std::chrono::steady_clock::now();
  auto t = omega_coeffs(260416, ModularRing(23));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(t.upto(), 260416u);
  EXPECT_EQ(t[0], 1u);
  EXPECT_LT(seconds, 60.0);
}

TEST(F, DefinitionValues) {
  // f(q) = sum q^{n^2} / (-q; q)_n^2, expanded directly
  EXPECT_EQ(f_coeffs(16, Z).values, ints({1, 1, -2, 3, -3, 3, -5, 7, -6, 6, -10, 12, -11, 13, -17, 20, -21}));
  EXPECT_EQ(f_coeffs(0, Z).values, ints({1}));
  EXPECT_EQ(f_coeffs(1, Z)[1], 1);
}

TEST(F, MatchesTermByTermExpansion) {
  EXPECT_EQ(f_coeffs(299, Z).values, oracle::mock_f(300));
}

TEST(F, ModularMatchesExactReduction) {
  auto exact = f_coeffs(2000, Z);
  for (u64 m : {5ull, 23ull, 529ull}) {
    auto mod = f_coeffs(2000, ModularRing(m));
    for (std::size_t n = 0; n <= 2000; ++n) {
      mpz_class r = exact[n] % m;
      if (r < 0) r += m;
      ASSERT_EQ(mod[n], r.get_ui()) << m << " " << n;
    }
  }
}

TEST(MockTables, GrowsAndInstalls) {
  MockTables<IntegerRing> tables{Z};
  EXPECT_FALSE(tables.has(MockFunction::omega));
  EXPECT_EQ(tables.omega(10)[10], 29);
  EXPECT_EQ(tables.omega_depth(), 10u);
  EXPECT_EQ(tables.omega(416)[416], mpz_class("147019574355949"));
  EXPECT_EQ(tables.omega(5).upto(), 416u);
  tables.install(MockCoeffTable<IntegerRing>{MockFunction::f, Z, ints({1, 1, 7})});
  EXPECT_EQ(tables.f(2)[2], 7);
  MockTables<ModularRing> mt{ModularRing(23)};
  EXPECT_THROW(mt.install(MockCoeffTable<ModularRing>{MockFunction::f, ModularRing(5), {1}}), Error);
}

TEST(CPlus, Examples) {
  MockTables<IntegerRing> t{Z};
  const Discriminant d8(-8), d23(-23);
  EXPECT_EQ(c_plus<IntegerRing>({d8, 4, 1}, t), -4);
  EXPECT_EQ(c_plus<IntegerRing>({d8, 4, 3}, t), 0);
  EXPECT_EQ(c_plus<IntegerRing>({d8, 4, 2}, t), 12);
  EXPECT_EQ(c_plus<IntegerRing>({d23, 1, 1}, t), 1);
  auto e = c_plus_entry({d23, 1, 5});
  EXPECT_EQ(e.source, MockFunction::f);
  EXPECT_EQ(e.index, 24u);
  EXPECT_EQ(e.multiplier, -1);
  EXPECT_EQ(c_plus<IntegerRing>({d23, 1, 5}, t), -f_coeffs(24, Z)[24]);
}

TEST(CPlus, Errors) {
  MockTables<IntegerRing> t{Z};
  EXPECT_THROW(c_plus<IntegerRing>({Discriminant(-7), 1, 1}, t), Error);
  EXPECT_THROW(c_plus<IntegerRing>({Discriminant(-8), 4, 0}, t), Error);
}

TEST(CSeries, Examples) {
  MockTables<IntegerRing> t{Z};
  auto c = c_series(Discriminant(-8), 4, 3, t);
  EXPECT_EQ(c, ints({0, -4, 12, 0}));
  auto c23 = c_series(Discriminant(-23), 1, 5, t);
  EXPECT_EQ(c23[1], 1);
  EXPECT_EQ(c23[5], -f_coeffs(24, Z)[24]);
}

TEST(CSeries, OmegaBranchValues) {
  // c(d) for (-8, 4) where the omega factor is -4, from the key / parity table
  MockTables<IntegerRing> t{Z};
  auto om = omega_coeffs(3000, Z);
  auto c = c_series(Discriminant(-8), 4, 50, t);
  for (u64 d = 1; d <= 50; ++d) {
    const u64 key = 4 * d % 12;
    if (key == 0) {
      ASSERT_EQ(c[d], 0) << d;
      continue;
    }
    const u64 x = (8 * d * d - 8) / 12;
    // key 4 or 8 means x even (factor -2((-1)^x + 1) = -4), with sign flipped at 8
    ASSERT_EQ(x % 2, 0u);
    const int sign = key == 4 ? 1 : -1;
    ASSERT_EQ(c[d], sign * -4 * om[x]) << d;
  }
}

TEST(Dictionary, Antisymmetric) {
  for (i64 D : fundamental_negative(-500)) {
    for (i64 r = 0; r < 24; ++r) {
      if (nt::mod_floor(D - r * r, 24) != 0) continue;
      const Discriminant delta(D);
      for (u64 d = 1; d < 24; ++d) {
        auto a = dictionary_rule(delta, r, d);
        auto b = dictionary_rule(delta, -r, d);  // key 12 - k
        ASSERT_EQ(a.source, b.source);
        ASSERT_EQ(a.multiplier, -b.multiplier) << D << " " << r << " " << d;
        if (a.source == MockFunction::omega) {
          ASSERT_TRUE(a.multiplier == 4 || a.multiplier == -4);
        } else if (a.source == MockFunction::f) {
          ASSERT_TRUE(a.multiplier == 1 || a.multiplier == -1);
        }
      }
    }
  }
}

TEST(Dictionary, IndicesIntegralOnRandomQueries) {
  auto discs = fundamental_negative(-5000);
  std::mt19937_64 rng(13);
  int done = 0;
  while (done < 1000) {
    const i64 D = discs[rng() % discs.size()];
    const i64 r = static_cast<i64>(rng() % 48) - 24;
    if (nt::mod_floor(D - r * r, 24) != 0) continue;
    const u64 d = rng() % 100000 + 1;
    const auto e = c_plus_entry({Discriminant(D), r, d});
    if (e.source) {
      mpz_class scaled = mpz_class(static_cast<unsigned long>(-D)) * d * d;
      if (*e.source == MockFunction::f) {
        ASSERT_EQ(mpz_class(scaled + 1) % 24, 0);
        ASSERT_EQ(mpz_class(e.index), mpz_class((scaled + 1) / 24));
      } else {
        ASSERT_EQ(mpz_class(scaled - 8) % 12, 0);
        ASSERT_GE(scaled, 8);
        ASSERT_EQ(mpz_class(e.index), mpz_class((scaled - 8) / 12));
      }
    }
    ++done;
  }
}

TEST(Dictionary, RequiredDepth) {
  auto depth = required_depth(Discriminant(-8), 4, 250);
  EXPECT_EQ(depth.omega, (8ull * 250 * 250 - 8) / 12);
  EXPECT_EQ(depth.f, 0u);
  auto d23 = required_depth(Discriminant(-23), 1, 7);
  EXPECT_EQ(d23.f, (23ull * 49 + 1) / 24);
}
