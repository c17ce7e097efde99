#ifndef QMOCK_ERRORS_HPP
#define QMOCK_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qmock {

enum class ErrorCode {
  NotInvertible,
  RingMismatch,
  ExponentMismatch,
  NonUnitConstantTerm,
  FractionalExponent,
  NonIntegralNormalization,
  InsufficientPrecision,
  IndexNotIntegral,
  NonDivisible,
  ZeroNormalizer,
  UncoveredPrime,
  SmallPrime,
  InvalidArgument,
  SyntaxError,
  NonUnitDenominator,
  NonIntegralExponent,
  NegativeValuation,
  CacheCorrupt,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::RingMismatch: return "RingMismatch";
    case ErrorCode::ExponentMismatch: return "ExponentMismatch";
    case ErrorCode::NonUnitConstantTerm: return "NonUnitConstantTerm";
    case ErrorCode::FractionalExponent: return "FractionalExponent";
    case ErrorCode::NonIntegralNormalization: return "NonIntegralNormalization";
    case ErrorCode::InsufficientPrecision: return "InsufficientPrecision";
    case ErrorCode::IndexNotIntegral: return "IndexNotIntegral";
    case ErrorCode::NonDivisible: return "NonDivisible";
    case ErrorCode::ZeroNormalizer: return "ZeroNormalizer";
    case ErrorCode::UncoveredPrime: return "UncoveredPrime";
    case ErrorCode::SmallPrime: return "SmallPrime";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::NonUnitDenominator: return "NonUnitDenominator";
    case ErrorCode::NonIntegralExponent: return "NonIntegralExponent";
    case ErrorCode::NegativeValuation: return "NegativeValuation";
    case ErrorCode::CacheCorrupt: return "CacheCorrupt";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure; `offset` is the byte offset into the source text.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::string expected)
      : Error(ErrorCode::SyntaxError,
              "at offset " + std::to_string(offset) + ", expected " + expected),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

}  // namespace qmock

#endif  // QMOCK_ERRORS_HPP
