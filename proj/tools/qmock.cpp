// qmock: command-line driver for mock theta coefficients, Phi* expansions,
// Hecke eigenchecks, congruence certification, expression evaluation and scans.

#include <gmpxx.h>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmock/borcherds.hpp"
#include "qmock/cache.hpp"
#include "qmock/congruence.hpp"
#include "qmock/errors.hpp"
#include "qmock/hecke.hpp"
#include "qmock/mocktheta.hpp"
#include "qmock/parallel.hpp"
#include "qmock/qexpr.hpp"
#include "qmock/ring.hpp"

using namespace qmock;
using nlohmann::json;

namespace {

enum Exit { ok = 0, usage = 2, cache_error = 3, degenerate = 4, eigen_failed = 5, certify_failed = 6 };

struct Common {
  bool json_out = false;
  unsigned threads = 1;
  std::string cache_dir;
  std::string cache_format = "text";
};

void add_common(CLI::App* cmd, Common& c, bool with_cache) {
  cmd->add_flag("--json", c.json_out, "Emit JSON instead of CSV");
  cmd->add_option("--threads", c.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::Range(1u, 1024u));
  if (with_cache) {
    cmd->add_option("--cache-dir", c.cache_dir, "Coefficient cache directory (default: $QMOCK_CACHE_DIR)");
    cmd->add_option("--cache-format", c.cache_format, "Cache file format for residues")
        ->check(CLI::IsMember({"text", "binary"}));
  }
}

cache::Format format_of(const Common& c, u64 modulus) {
  return c.cache_format == "binary" && modulus != 0 ? cache::Format::binary : cache::Format::text;
}

// --- mock tables through the cache ----------------------------------------

void store_values(cache::Entry& e, const IntegerRing&, const std::vector<mpz_class>& v) { e.exact = v; }
void store_values(cache::Entry& e, const ModularRing&, const std::vector<u64>& v) { e.residues = v; }

std::vector<mpz_class> stored_values(const cache::Entry& e, const IntegerRing&) { return e.exact; }
std::vector<u64> stored_values(const cache::Entry& e, const ModularRing&) { return e.residues; }

u64 modulus_of(const IntegerRing&) { return 0; }
u64 modulus_of(const ModularRing& r) { return r.modulus(); }

template <class Ring>
void ensure_mock(MockTables<Ring>& tables, MockFunction which, std::size_t upto, const Common& common) {
  const bool have = which == MockFunction::f ? tables.f_depth() >= upto && tables.has(which)
                                             : tables.omega_depth() >= upto && tables.has(which);
  if (have) return;
  const auto dir = cache::resolve_dir(common.cache_dir);
  const Ring& ring = tables.ring();
  if (!dir) {
    which == MockFunction::f ? tables.f(upto) : tables.omega(upto);
    return;
  }
  cache::Header key;
  key.function = to_string(which);
  key.modulus = modulus_of(ring);
  key.prec = upto;
  const auto format = format_of(common, key.modulus);
  if (auto hit = cache::lookup(*dir, key, format)) {
    auto values = stored_values(*hit, ring);
    values.resize(upto + 1);
    tables.install(MockCoeffTable<Ring>{which, ring, std::move(values)});
    return;
  }
  const auto& table = which == MockFunction::f ? tables.f(upto) : tables.omega(upto);
  cache::Entry e;
  e.header = key;
  e.header.created = cache::utc_timestamp();
  store_values(e, ring, table.values);
  cache::save(cache::entry_path(*dir, key, format), e, format);
}

template <class Ring>
void warm_tables(MockTables<Ring>& tables, const TwistParams& params, std::size_t D, const Common& common) {
  const TableDepth depth = required_depth(params.delta, params.r, D);
  if (depth.omega > 0) ensure_mock(tables, MockFunction::omega, depth.omega, common);
  if (depth.f > 0) ensure_mock(tables, MockFunction::f, depth.f, common);
}

// --- output -----------------------------------------------------------------

template <class Ring, class Vec>
void emit_table(const Common& c, json doc, const Ring& ring, const Vec& values, std::size_t first_index,
                const std::string& column) {
  if (c.json_out) {
    json arr = json::array();
    for (const auto& v : values) arr.push_back(ring.to_string(v));
    doc["first_index"] = first_index;
    doc["values"] = std::move(arr);
    std::cout << doc.dump() << '\n';
    return;
  }
  std::cout << "n," << column << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) std::cout << first_index + i << ',' << ring.to_string(values[i]) << '\n';
}

json modulus_json(u64 m) { return m == 0 ? json(nullptr) : json(m); }

// --- commands -----------------------------------------------------------------

struct CoeffsArgs {
  std::string function = "omega";
  std::size_t upto = 0;
  u64 modulus = 0;
  bool exact = false;
};

template <class Ring>
int run_coeffs(const CoeffsArgs& a, const Common& c, const Ring& ring) {
  MockTables<Ring> tables(ring);
  const MockFunction which = a.function == "f" ? MockFunction::f : MockFunction::omega;
  ensure_mock(tables, which, a.upto, c);
  const auto& table = which == MockFunction::f ? tables.f(a.upto) : tables.omega(a.upto);
  std::vector<typename Ring::value_type> values(table.values.begin(), table.values.begin() + a.upto + 1);
  json doc{{"command", "coeffs"}, {"function", a.function}, {"modulus", modulus_json(modulus_of(ring))},
           {"upto", a.upto}};
  emit_table(c, std::move(doc), ring, values, 0, "a");
  return ok;
}

struct PhiArgs {
  i64 delta = 0;
  i64 r = 0;
  std::size_t prec = 10;
  u64 modulus = 0;
};

template <class Ring>
int run_phi(const PhiArgs& a, const Common& c, const Ring& ring) {
  const TwistParams params(a.delta, a.r);
  MockTables<Ring> tables(ring);
  warm_tables(tables, params, a.prec, c);
  const auto phi = phi_star(params, a.prec, tables);
  std::vector<typename Ring::value_type> values(phi.series.coeffs().begin() + 1, phi.series.coeffs().end());
  json doc{{"command", "phi"},     {"delta", a.delta},
           {"r", a.r},             {"modulus", modulus_json(modulus_of(ring))},
           {"prec", a.prec},       {"c1", phi.c1.get_str()}};
  emit_table(c, std::move(doc), ring, values, 1, "b");
  return ok;
}

struct CongruenceArgs {
  i64 delta = -8;
  i64 r = 4;
  u64 p = 5;
  u64 ell = 23;
  u64 R = 1;
  u64 B = 2;
  std::optional<std::size_t> prec;
  u64 lambda = 0;
};

json report_json(const HeckeCheckReport& rep, const CongruenceArgs& a) {
  return json{{"command", "heckecheck"},
              {"delta", a.delta},
              {"r", a.r},
              {"p", rep.p},
              {"ell", rep.setting.ell},
              {"R", rep.setting.R},
              {"B", rep.setting.B},
              {"k", rep.setting.k},
              {"modulus", rep.modulus},
              {"lambda", rep.lambda},
              {"requested_prec", rep.requested_prec},
              {"verified_prec", rep.verified_prec},
              {"first_failure", rep.first_failure ? json(*rep.first_failure) : json(nullptr)},
              {"certified", rep.certified},
              {"sturm_bound", rep.sturm},
              {"sturm_met", rep.sturm_met},
              {"sturm_complete", rep.sturm_complete()},
              {"pole_count_hypothesis", a.B},
              {"table_depth", {{"omega", rep.table_depth.omega}, {"f", rep.table_depth.f}}}};
}

HeckeCheckReport run_eigencheck(const CongruenceArgs& a, const Common& c, MockTables<ModularRing>& tables) {
  const TwistParams params(a.delta, a.r);
  const auto setting = CongruenceSetting::make(a.ell, a.R, a.B);
  const std::size_t P = a.prec.value_or(sturm_bound(setting.k, kPhiLevel));
  require_eigencheck_inputs(params, setting, a.p);
  warm_tables(tables, params, eigencheck_phi_prec(a.p, P), c);
  return eigencheck(params, setting, a.p, a.lambda, P, tables);
}

int cmd_heckecheck(const CongruenceArgs& a, const Common& c) {
  const auto setting = CongruenceSetting::make(a.ell, a.R, a.B);
  MockTables<ModularRing> tables{ModularRing(setting.modulus())};
  const auto rep = run_eigencheck(a, c, tables);
  std::cout << report_json(rep, a).dump() << '\n';
  return rep.certified ? ok : eigen_failed;
}

int cmd_certify(const CongruenceArgs& a, const std::vector<u64>& Ms, const Common& c) {
  const TwistParams params(a.delta, a.r);
  const auto setting = CongruenceSetting::make(a.ell, a.R, a.B);
  const ModularRing ring(setting.modulus());
  MockTables<ModularRing> tables{ring};
  const auto rep = run_eigencheck(a, c, tables);
  if (!rep.certified) {
    std::cerr << "eigencheck failed at q^" << *rep.first_failure << "; nothing to certify\n";
    if (c.json_out) std::cout << report_json(rep, a).dump() << '\n';
    return eigen_failed;
  }
  const EigenData eigen{setting, a.p, a.lambda % ring.modulus()};
  struct Row {
    MockPrediction pred;
    u64 actual;
  };
  std::vector<Row> rows;
  for (u64 M : Ms) rows.push_back({predict_mock(params, eigen, M), 0});
  for (auto& row : rows) {
    if (!row.pred.index.fits_ulong_p())
      throw Error(ErrorCode::InvalidArgument, "index " + row.pred.index.get_str() + " is too large to compute");
    const u64 idx = row.pred.index.get_ui();
    ensure_mock(tables, row.pred.function, idx, c);
    const auto& table = row.pred.function == MockFunction::f ? tables.f(idx) : tables.omega(idx);
    row.actual = table[idx];
  }
  bool all = true;
  if (c.json_out) {
    json arr = json::array();
    for (const auto& row : rows) {
      all = all && row.pred.residue == row.actual;
      arr.push_back({{"M", row.pred.M},
                     {"function", to_string(row.pred.function)},
                     {"index", row.pred.index.get_str()},
                     {"predicted", std::to_string(row.pred.residue)},
                     {"actual", std::to_string(row.actual)},
                     {"match", row.pred.residue == row.actual}});
    }
    json doc{{"command", "certify"}, {"delta", a.delta}, {"r", a.r},       {"p", a.p},
             {"ell", a.ell},         {"R", a.R},         {"B", a.B},       {"k", setting.k},
             {"modulus", ring.modulus()}, {"lambda", eigen.lambda}, {"rows", std::move(arr)}};
    doc["all_match"] = all;
    std::cout << doc.dump() << '\n';
  } else {
    std::cout << "M,function,index,predicted,actual,match\n";
    for (const auto& row : rows) {
      const bool match = row.pred.residue == row.actual;
      all = all && match;
      std::cout << row.pred.M << ',' << to_string(row.pred.function) << ',' << row.pred.index.get_str() << ','
                << row.pred.residue << ',' << row.actual << ',' << (match ? "true" : "false") << '\n';
    }
  }
  return all ? ok : certify_failed;
}

struct EvalArgs {
  std::string expression;
  std::size_t prec = 10;
  u64 modulus = 0;
};

template <class Ring>
int run_eval(const EvalArgs& a, const Common& c, const Ring& ring) {
  const auto ast = qexpr::parse(a.expression);
  const auto s = qexpr::evaluate(ast, a.prec, ring);
  json doc{{"command", "eval"}, {"expression", qexpr::print(ast)}, {"modulus", modulus_json(modulus_of(ring))},
           {"prec", a.prec}};
  emit_table(c, std::move(doc), ring, s.coeffs(), 0, "coeff");
  return ok;
}

struct ScanArgs {
  i64 delta = -8;
  i64 r = 4;
  u64 ell = 23;
  u64 R = 1;
  u64 B = 2;
  u64 bound = 30;
  std::optional<std::size_t> prec;
};

int cmd_scan(const ScanArgs& a, const Common& c) {
  const TwistParams params(a.delta, a.r);
  const auto setting = CongruenceSetting::make(a.ell, a.R, a.B);
  const std::size_t P = a.prec.value_or(sturm_bound(setting.k, kPhiLevel));
  MockTables<ModularRing> tables{ModularRing(setting.modulus())};
  std::vector<u64> primes;
  for (u64 p : nt::primes_up_to(a.bound))
    if (p != 2 && p != 3 && p != a.ell) primes.push_back(p);
  if (!primes.empty()) warm_tables(tables, params, eigencheck_phi_prec(primes.back(), P), c);
  const auto rows = density_scan(params, setting, a.bound, P, tables);
  if (c.json_out) {
    json arr = json::array();
    for (const auto& row : rows)
      arr.push_back({{"p", row.p},
                     {"class", to_string(row.classification)},
                     {"b_p", std::to_string(row.b_p)},
                     {"first_failure", row.first_failure ? json(*row.first_failure) : json(nullptr)}});
    std::cout << json{{"command", "scan"},  {"delta", a.delta}, {"r", a.r},   {"ell", a.ell},
                      {"R", a.R},           {"B", a.B},         {"k", setting.k}, {"prec", P},
                      {"bound", a.bound},   {"rows", std::move(arr)}}
                     .dump()
              << '\n';
  } else {
    std::cout << "p,class,b_p,first_failure\n";
    for (const auto& row : rows)
      std::cout << row.p << ',' << to_string(row.classification) << ',' << row.b_p << ','
                << (row.first_failure ? std::to_string(*row.first_failure) : "") << '\n';
  }
  return ok;
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::CacheCorrupt: return cache_error;
    case ErrorCode::ZeroNormalizer: return degenerate;
    default: return usage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mock theta coefficients, Phi* expansions and Hecke congruences"};
  app.require_subcommand(1);
  Common common;

  CoeffsArgs coeffs;
  auto* c_coeffs = app.add_subcommand("coeffs", "Coefficients of f or omega");
  c_coeffs->add_option("--function", coeffs.function, "f or omega")->required()->check(CLI::IsMember({"f", "omega"}));
  c_coeffs->add_option("--upto", coeffs.upto, "Largest index")->required();
  auto* c_mod = c_coeffs->add_option("--modulus", coeffs.modulus, "Reduce mod m")->check(CLI::Range(u64{2}, u64{1} << 62));
  c_coeffs->add_flag("--exact", coeffs.exact, "Exact integers (default)")->excludes(c_mod);
  add_common(c_coeffs, common, true);

  PhiArgs phi;
  auto* c_phi = app.add_subcommand("phi", "Normalized expansion b(1..prec) of Phi*");
  c_phi->add_option("--delta", phi.delta, "Negative fundamental discriminant")->required();
  c_phi->add_option("--r", phi.r, "Residue with delta = r^2 mod 24")->required();
  c_phi->add_option("--prec", phi.prec, "Number of coefficients")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30));
  c_phi->add_option("--modulus", phi.modulus, "Reduce mod m")->check(CLI::Range(u64{2}, u64{1} << 62));
  add_common(c_phi, common, true);

  CongruenceArgs cong;
  auto add_congruence = [&](CLI::App* cmd, bool with_p) {
    cmd->add_option("--delta", cong.delta, "Negative fundamental discriminant")->capture_default_str();
    cmd->add_option("--r", cong.r, "Residue with delta = r^2 mod 24")->capture_default_str();
    if (with_p) cmd->add_option("--p", cong.p, "Hecke prime")->capture_default_str();
    cmd->add_option("--ell", cong.ell, "Congruence prime")->required();
    cmd->add_option("--R", cong.R, "Exponent of ell")->capture_default_str();
    cmd->add_option("--B", cong.B, "Pole count")->capture_default_str();
    cmd->add_option("--prec", cong.prec, "Coefficients checked, q^0..q^prec (default: Sturm bound)");
    cmd->add_option("--lambda", cong.lambda, "Eigenvalue")->capture_default_str();
    add_common(cmd, common, true);
  };
  auto* c_hecke = app.add_subcommand("heckecheck", "Certify Phi* | T_p = lambda Phi* mod ell^R");
  add_congruence(c_hecke, true);

  std::vector<u64> Ms;
  auto* c_cert = app.add_subcommand("certify", "Predicted vs computed a_f / a_omega residues");
  add_congruence(c_cert, true);
  c_cert->add_option("--M", Ms, "Exponents M (comma separated)")->delimiter(',')->check(CLI::Range(u64{1}, u64{64}));

  EvalArgs ev;
  auto* c_eval = app.add_subcommand("eval", "Expand an eta / Eisenstein expression");
  c_eval->add_option("expression", ev.expression, "Expression text")->required();
  c_eval->add_option("--prec", ev.prec, "Number of coefficients")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 24));
  c_eval->add_option("--modulus", ev.modulus, "Reduce mod m")->check(CLI::Range(u64{2}, u64{1} << 62));
  add_common(c_eval, common, false);

  ScanArgs scan;
  auto* c_scan = app.add_subcommand("scan", "Classify primes by certified eigenvalue");
  c_scan->add_option("--delta", scan.delta)->capture_default_str();
  c_scan->add_option("--r", scan.r)->capture_default_str();
  c_scan->add_option("--ell", scan.ell)->required();
  c_scan->add_option("--R", scan.R)->capture_default_str();
  c_scan->add_option("--B", scan.B)->capture_default_str();
  c_scan->add_option("--bound", scan.bound, "Largest prime scanned")->capture_default_str();
  c_scan->add_option("--prec", scan.prec, "Coefficients checked (default: Sturm bound)");
  add_common(c_scan, common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    parallel::set_thread_count(common.threads);
    if (*c_coeffs)
      return coeffs.modulus ? run_coeffs(coeffs, common, ModularRing(coeffs.modulus))
                            : run_coeffs(coeffs, common, IntegerRing{});
    if (*c_phi)
      return phi.modulus ? run_phi(phi, common, ModularRing(phi.modulus)) : run_phi(phi, common, IntegerRing{});
    if (*c_hecke) return cmd_heckecheck(cong, common);
    if (*c_cert) return cmd_certify(cong, Ms, common);
    if (*c_eval)
      return ev.modulus ? run_eval(ev, common, ModularRing(ev.modulus)) : run_eval(ev, common, IntegerRing{});
    if (*c_scan) return cmd_scan(scan, common);
  } catch (const Error& e) {
    std::cerr << "qmock: " << e.what() << '\n';
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "qmock: " << e.what() << '\n';
    return 1;
  }
  return usage;
}
