#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace witten {

enum class ErrorCode {
  AsymmetricInput,
  IndexOutOfRange,
  InvalidRequest,
  NoConvergence,
  NegativeSpectrum,
  AmbiguousGap,
  DegreeOutOfRange,
  NotClosed,
  ParseError,
  UnknownCatalogEntry,
  NonConvergence,
  DegenerateCritical,
  LengthMismatch,
  NonzeroRemainder,
  IdentityViolation,
  InsufficientSpectrum,
  NoGap,
  WellTooCloseToBoundary,
  OverlappingSupports,
  NonDiagonalPartition,
  InvalidInput,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library surfaces as an Error carrying a stable code;
/// the harness maps codes to `error:<code>` verdicts.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace witten
