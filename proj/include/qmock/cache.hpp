#ifndef QMOCK_CACHE_HPP
#define QMOCK_CACHE_HPP

// On-disk coefficient arrays for a_f, a_omega and Phi*.
//
// Text format: one JSON header line, then either one decimal integer per line
// (exact ring) or a single JSON array of residues (modular ring).
// Binary format (modular only): "QSER1", u64 header length, header JSON,
// u64 count, count little-endian u64 words.

#include <gmpxx.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qmock/errors.hpp"
#include "qmock/ntheory.hpp"

namespace qmock::cache {

inline constexpr const char* kTextTag = "qmock-coeffs-v1";
inline constexpr char kBinaryMagic[5] = {'Q', 'S', 'E', 'R', '1'};

enum class Format { text, binary };

struct Header {
  std::string function;  // "f", "omega" or "phi_star"
  i64 delta = 0;         // phi_star only
  i64 r = 0;
  u64 modulus = 0;  // 0: exact integers
  u64 prec = 0;     // f / omega: values a(0..prec); phi_star: b(1..prec)
  std::string created;

  std::size_t payload_length() const { return function == "phi_star" ? prec : prec + 1; }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["format"] = kTextTag;
    j["function"] = function;
    j["delta"] = delta;
    j["r"] = r;
    j["modulus"] = modulus;
    j["prec"] = prec;
    j["created"] = created;
    return j;
  }
};

/// Stored coefficients; `exact` is filled for modulus 0, `residues` otherwise.
struct Entry {
  Header header;
  std::vector<mpz_class> exact;
  std::vector<u64> residues;
};

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

[[noreturn]] inline void corrupt(const std::filesystem::path& path, const std::string& why) {
  throw Error(ErrorCode::CacheCorrupt, path.string() + ": " + why);
}

inline Header parse_header(const std::filesystem::path& path, const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception&) {
    corrupt(path, "header is not JSON");
  }
  try {
    if (j.at("format").get<std::string>() != kTextTag) corrupt(path, "unknown format tag");
    Header h;
    h.function = j.at("function").get<std::string>();
    h.delta = j.at("delta").get<i64>();
    h.r = j.at("r").get<i64>();
    h.modulus = j.at("modulus").get<u64>();
    h.prec = j.at("prec").get<u64>();
    h.created = j.at("created").get<std::string>();
    if (h.function != "f" && h.function != "omega" && h.function != "phi_star") corrupt(path, "unknown function");
    if (h.modulus == 1) corrupt(path, "modulus 1");
    return h;
  } catch (const nlohmann::json::exception&) {
    corrupt(path, "header is missing fields");
  }
}

inline void check_residues(const std::filesystem::path& path, const Entry& e) {
  if (e.residues.size() != e.header.payload_length()) corrupt(path, "payload length disagrees with header");
  for (u64 v : e.residues)
    if (v >= e.header.modulus) corrupt(path, "residue out of range");
}

inline void write_u64(std::ostream& out, u64 v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

inline bool read_u64(std::istream& in, u64& v) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<u64>(b[i]) << (8 * i);
  return true;
}

inline void save(const std::filesystem::path& path, const Entry& e, Format format) {
  std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::CacheCorrupt, "cannot write " + tmp);
    const std::string header = e.header.to_json().dump();
    if (format == Format::binary) {
      if (e.header.modulus == 0) throw Error(ErrorCode::InvalidArgument, "binary cache holds residues only");
      out.write(kBinaryMagic, sizeof kBinaryMagic);
      write_u64(out, header.size());
      out << header;
      write_u64(out, e.residues.size());
      for (u64 v : e.residues) write_u64(out, v);
    } else {
      out << header << '\n';
      if (e.header.modulus == 0) {
        for (const auto& v : e.exact) out << v.get_str() << '\n';
      } else {
        out << nlohmann::json(e.residues).dump() << '\n';
      }
    }
    if (!out) throw Error(ErrorCode::CacheCorrupt, "short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

inline Entry load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) corrupt(path, "cannot open");
  char magic[sizeof kBinaryMagic] = {};
  in.read(magic, sizeof magic);
  Entry e;
  if (in.gcount() == sizeof magic && std::equal(magic, magic + sizeof magic, kBinaryMagic)) {
    u64 len = 0, count = 0;
    if (!read_u64(in, len) || len > (u64{1} << 20)) corrupt(path, "bad header length");
    std::string header(len, '\0');
    if (!in.read(header.data(), static_cast<std::streamsize>(len))) corrupt(path, "truncated header");
    e.header = parse_header(path, header);
    if (e.header.modulus == 0) corrupt(path, "binary payload needs a modulus");
    if (!read_u64(in, count) || count != e.header.payload_length()) corrupt(path, "bad payload count");
    e.residues.resize(count);
    for (auto& v : e.residues)
      if (!read_u64(in, v)) corrupt(path, "truncated payload");
    if (in.peek() != std::ifstream::traits_type::eof()) corrupt(path, "trailing bytes");
    check_residues(path, e);
    return e;
  }

  in.clear();
  in.seekg(0);
  std::string line;
  if (!std::getline(in, line)) corrupt(path, "empty file");
  e.header = parse_header(path, line);
  if (e.header.modulus == 0) {
    e.exact.reserve(e.header.payload_length());
    while (std::getline(in, line)) {
      mpz_class v;
      if (line.empty() || v.set_str(line, 10) != 0) corrupt(path, "bad integer line");
      e.exact.push_back(std::move(v));
    }
    if (e.exact.size() != e.header.payload_length()) corrupt(path, "payload length disagrees with header");
  } else {
    if (!std::getline(in, line)) corrupt(path, "missing payload");
    try {
      e.residues = nlohmann::json::parse(line).get<std::vector<u64>>();
    } catch (const nlohmann::json::exception&) {
      corrupt(path, "payload is not an array of residues");
    }
    if (std::getline(in, line) && !line.empty()) corrupt(path, "trailing data");
    check_residues(path, e);
  }
  return e;
}

/// Directory holding cache files: explicit flag, else $QMOCK_CACHE_DIR, else none.
inline std::optional<std::filesystem::path> resolve_dir(const std::string& flag) {
  if (!flag.empty()) return std::filesystem::path(flag);
  if (const char* env = std::getenv("QMOCK_CACHE_DIR"); env && *env) return std::filesystem::path(env);
  return std::nullopt;
}

/// One file per (function, delta, r, modulus, format); deeper entries supersede shallower ones.
inline std::filesystem::path entry_path(const std::filesystem::path& dir, const Header& key, Format format) {
  std::string name = key.function;
  if (key.function == "phi_star") name += "_d" + std::to_string(key.delta) + "_r" + std::to_string(key.r);
  name += key.modulus == 0 ? "_exact" : "_m" + std::to_string(key.modulus);
  name += format == Format::binary ? ".qser" : ".txt";
  return dir / name;
}

/// Loads a cached entry covering `key.prec`, or nullopt when absent or too shallow.
/// Throws CacheCorrupt when the file exists but does not parse or does not match the key.
inline std::optional<Entry> lookup(const std::filesystem::path& dir, const Header& key, Format format) {
  const auto path = entry_path(dir, key, format);
  if (!std::filesystem::exists(path)) return std::nullopt;
  Entry e = load(path);
  if (e.header.function != key.function || e.header.modulus != key.modulus ||
      (key.function == "phi_star" && (e.header.delta != key.delta || e.header.r != key.r)))
    corrupt(path, "header does not match the file name");
  if (e.header.prec < key.prec) return std::nullopt;
  return e;
}

}  // namespace qmock::cache

#endif  // QMOCK_CACHE_HPP
