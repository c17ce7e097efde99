// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qmock/borcherds.hpp"
#include "qmock/hecke.hpp"
#include "qmock/mocktheta.hpp"
#include "qmock/ntheory.hpp"
#include "qmock/series.hpp"

using namespace qmock;
using boost::multiprecision::mpfr_float;

namespace {

// tolerances and budgets
constexpr double kAc1Seconds = 1.0;
constexpr double kAc2Seconds = 5.0;
constexpr double kAc3Seconds = 60.0;
constexpr double kAc4Seconds = 300.0;
constexpr double kAc7Seconds = 30.0;
constexpr double kOracleTol = 1e-6;
constexpr double kGaussTol = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  return out.str();
}

template <class Table, class T>
void expect_prefix(Outcome& o, const char* name, const Table& got, const std::vector<T>& want) {
  std::vector<std::string> g, w;
  for (std::size_t n = 0; n < want.size(); ++n) {
    g.push_back(mpz_class(got[n]).get_str());
    w.push_back(mpz_class(want[n]).get_str());
  }
  if (g != w) o.fail(std::string(name) + " = " + join(g) + ", expected " + join(w));
}

Outcome ac1() {
  Outcome o;
  const IntegerRing Z;
  expect_prefix(o, "a_omega(0..11)", omega_coeffs(11, Z), std::vector<long>{1, 2, 3, 4, 6, 8, 10, 14, 18, 22, 29, 36});
  expect_prefix(o, "a_f(0..16)", f_coeffs(16, Z),
                std::vector<long>{1, 1, -1, 1, 0, 0, -1, 1, 0, 1, -2, 1, -1, 2, -2, 2, -1});
  return o;
}

Outcome ac2() {
  Outcome o;
  const auto t = omega_coeffs(416, IntegerRing{});
  if (t[16] != 101) o.fail("a_omega(16) = " + t[16].get_str());
  if (t[416] != mpz_class("147019574355949")) o.fail("a_omega(416) = " + t[416].get_str());
  return o;
}

Outcome ac3() {
  Outcome o;
  const auto t = omega_coeffs(260416, ModularRing(23));
  const std::pair<u64, u64> rows[] = {{16, 9}, {416, 9}, {10416, 12}, {260416, 12}};
  for (auto [n, r] : rows)
    if (t[n] != r) o.fail("a_omega(" + std::to_string(n) + ") = " + std::to_string(t[n]) + " mod 23");
  return o;
}

Outcome ac4() {
  Outcome o;
  const auto s = CongruenceSetting::make(23, 1, 2);
  if (s.k != 46) o.fail("k = " + std::to_string(s.k));
  MockTables<ModularRing> tables{ModularRing(23)};
  const auto rep = eigencheck(TwistParams(-8, 4), s, 5, 0, 50, tables);
  if (rep.sturm != 23) o.fail("Sturm bound " + std::to_string(rep.sturm));
  if (!rep.certified) o.fail("first failure at q^" + std::to_string(rep.first_failure.value_or(0)));
  if (rep.verified_prec != 50) o.fail("verified to q^" + std::to_string(rep.verified_prec));
  if (o.pass) o.detail = "certified to q^50, Sturm bound 23";
  return o;
}

Outcome ac5() {
  Outcome o;
  const TwistParams params(-8, 4);
  const auto s = CongruenceSetting::make(23, 1, 2);
  MockTables<ModularRing> tables{ModularRing(23)};
  if (!eigencheck(params, s, 5, 0, 50, tables).certified) {
    o.fail("eigencheck did not certify");
    return o;
  }
  const EigenData eigen{s, 5, 0};
  const u64 expect[] = {9, 9, 12, 12};
  std::vector<std::string> rows;
  for (u64 M = 1; M <= 4; ++M) {
    const auto pred = predict_mock(params, eigen, M);
    const u64 idx = pred.index.get_ui();
    const u64 actual = tables.omega(idx)[idx];
    rows.push_back(std::to_string(M) + ":" + std::to_string(pred.residue) + "=" + std::to_string(actual));
    if (pred.function != MockFunction::omega) o.fail("M = " + std::to_string(M) + " reads a_f");
    if (pred.residue != actual || actual != expect[M - 1])
      o.fail("M = " + std::to_string(M) + ": predicted " + std::to_string(pred.residue) + ", actual " +
             std::to_string(actual));
  }
  if (o.pass) o.detail = "M:predicted=actual " + join(rows);
  return o;
}

Outcome ac6() {
  Outcome o;
  if (hasse_weight(23, 2, 1) != 46) o.fail("hasse_weight(23,2,1) = " + std::to_string(hasse_weight(23, 2, 1)));
  if (hasse_weight(5, 2, 1) != 10) o.fail("hasse_weight(5,2,1) = " + std::to_string(hasse_weight(5, 2, 1)));
  return o;
}

Outcome ac7() {
  Outcome o;
  const unsigned saved = mpfr_float::default_precision();
  for (i64 D : {-8, -23}) {
    const TwistParams params(D, D == -8 ? 4 : 1);
    MockTables<IntegerRing> tables{IntegerRing{}};
    const auto phi = phi_star(params, 100, tables);
    const auto num = phi_raw_numeric(params, 100);
    mpfr_float::default_precision(256);
    for (std::size_t n = 1; n <= 100 && o.pass; ++n) {
      const mpfr_float rounded = round(num[n].re);
      const bool near = abs(num[n].re - rounded) < kOracleTol && abs(num[n].im) < kOracleTol;
      if (!near || rounded != mpfr_float(phi.b(n).get_mpz_t()))
        o.fail("D = " + std::to_string(D) + ", n = " + std::to_string(n) + ": oracle " + num[n].re.str(40) +
               " vs " + phi.b(n).get_str());
    }
    mpfr_float::default_precision(saved);
  }
  return o;
}

Outcome ac8() {
  Outcome o;
  const IntegerRing Z;
  for (i64 D : {-8, -23}) {
    const TwistParams params(D, D == -8 ? 4 : 1);
    MockTables<IntegerRing> tables{Z};
    const auto c = c_series(params.delta, params.r, 500, tables);
    std::vector<mpz_class> b(501);
    for (u64 n = 1; n <= 500; ++n) b[n] = b_from_c<IntegerRing>(c, n, params.delta, Z);
    for (u64 n = 1; n <= 500 && o.pass; ++n)
      if (c_from_b<IntegerRing>(b, n, params.delta, c[1], Z) != c[n])
        o.fail("D = " + std::to_string(D) + ", n = " + std::to_string(n));
  }
  return o;
}

Outcome ac9() {
  Outcome o;
  const auto s = CongruenceSetting::make(5, 1, 2);
  if (s.k != 10) o.fail("k = " + std::to_string(s.k));
  MockTables<ModularRing> tables{ModularRing(5)};
  const auto phi = phi_star(TwistParams(-8, 4), 3600, tables);
  const auto res = multiplicativity_check(phi, s, 60, 200);
  if (!res.ok) {
    o.fail(res.failed_relation + " fails at (" + std::to_string(res.counterexample->first) + ", " +
           std::to_string(res.counterexample->second) + ")");
  } else {
    o.detail = std::to_string(res.eigen_primes.size()) + " eigen primes up to 200";
  }
  return o;
}

Outcome ac10() {
  Outcome o;
  const Discriminant d(-8);
  const std::complex<double> sqrt_m8(0.0, 2.0 * std::sqrt(2.0));
  for (i64 a = 1; a <= 16; ++a) {
    const i64 r = a % 8;
    std::complex<double> want = 0;
    if (r == 1 || r == 3) want = -sqrt_m8;
    else if (r == 5 || r == 7) want = sqrt_m8;
    if (std::abs(nt::gauss_sum_numeric(a, d) - want) >= kGaussTol) o.fail("a = " + std::to_string(a));
  }
  return o;
}

Outcome ac11() {
  Outcome o;
  for (u64 ell : {5ull, 23ull}) {
    const auto e = eisenstein(static_cast<unsigned>(ell - 1), 200, ModularRing(ell));
    if (e.prec() != 200) o.fail("precision " + std::to_string(e.prec()));
    for (std::size_t n = 0; n < e.prec() && o.pass; ++n)
      if (e[n] != (n == 0 ? 1u : 0u)) o.fail("ell = " + std::to_string(ell) + ", n = " + std::to_string(n));
  }
  return o;
}

Outcome ac12() {
  Outcome o;
  const auto s = CongruenceSetting::make(23, 1, 2);
  MockTables<ModularRing> tables{ModularRing(23)};
  const auto rows = density_scan(TwistParams(-8, 4), s, 30, sturm_bound(s.k, kPhiLevel), tables);
  std::vector<std::string> cls;
  bool found = false;
  for (const auto& r : rows) {
    cls.push_back(std::to_string(r.p) + ":" + to_string(r.classification));
    if (r.p == 5) found = r.classification == EigenClass::zero;
  }
  if (!found) o.fail("p = 5 not classified with lambda = 0; " + join(cls));
  else o.detail = join(cls);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
  double budget;  // seconds; 0 = none
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "golden expansions of omega and f", ac1, kAc1Seconds},
      {2, "exact a_omega(16), a_omega(416)", ac2, kAc2Seconds},
      {3, "a_omega residues mod 23 to index 260416", ac3, kAc3Seconds},
      {4, "eigencheck D=-8 r=4 p=5 ell=23 B=2 to q^50", ac4, kAc4Seconds},
      {5, "certify M=1..4 predicted vs actual", ac5, 0},
      {6, "Hasse weights", ac6, 0},
      {7, "numeric oracle vs exact Phi* for n <= 100", ac7, kAc7Seconds},
      {8, "c_from_b o b_from_c round trip to 500", ac8, 0},
      {9, "Phi*_{-8,4} mod 5 multiplicativity", ac9, 0},
      {10, "Gauss sums G(a,-8), a = 1..16", ac10, 0},
      {11, "E_{ell-1} = 1 mod ell to q^200", ac11, 0},
      {12, "density scan classifies p = 5 with lambda = 0", ac12, 0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget > 0 && secs >= c.budget) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "over budget %.0f s", c.budget);
      o.fail(buf);
    }
    if (!o.pass) ++failures;
    std::printf("AC%-2d %s  %-48s %8.2fs  %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
