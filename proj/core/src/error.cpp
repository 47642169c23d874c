#include "witten/error.hpp"

namespace witten {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::AsymmetricInput: return "AsymmetricInput";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NegativeSpectrum: return "NegativeSpectrum";
    case ErrorCode::AmbiguousGap: return "AmbiguousGap";
    case ErrorCode::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownCatalogEntry: return "UnknownCatalogEntry";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DegenerateCritical: return "DegenerateCritical";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonzeroRemainder: return "NonzeroRemainder";
    case ErrorCode::IdentityViolation: return "IdentityViolation";
    case ErrorCode::InsufficientSpectrum: return "InsufficientSpectrum";
    case ErrorCode::NoGap: return "NoGap";
    case ErrorCode::WellTooCloseToBoundary: return "WellTooCloseToBoundary";
    case ErrorCode::OverlappingSupports: return "OverlappingSupports";
    case ErrorCode::NonDiagonalPartition: return "NonDiagonalPartition";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace witten
