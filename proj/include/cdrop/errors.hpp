#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cdrop {

enum class ErrorCode {
  InvalidArgument,
  InvalidDigit,
  TooLong,
  OutOfRange,
  ResolutionExceedsArea,
  ResolutionExceedsWindow,
  DensityTooHigh,
  MissingHome,
  TooManyAtoms,
  UnresolvedReference,
  CopyWithoutContext,
  NotFound,
  UndefinedForNegativeU,
  NotNormalized,
  ZeroProbabilityOutcome,
  MissingObserverData,
  WrongEventCount,
  NotAnEncounter,
  SchemaViolation,
  IoFailure,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidDigit: return "InvalidDigit";
    case ErrorCode::TooLong: return "TooLong";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ResolutionExceedsArea: return "ResolutionExceedsArea";
    case ErrorCode::ResolutionExceedsWindow: return "ResolutionExceedsWindow";
    case ErrorCode::DensityTooHigh: return "DensityTooHigh";
    case ErrorCode::MissingHome: return "MissingHome";
    case ErrorCode::TooManyAtoms: return "TooManyAtoms";
    case ErrorCode::UnresolvedReference: return "UnresolvedReference";
    case ErrorCode::CopyWithoutContext: return "CopyWithoutContext";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::UndefinedForNegativeU: return "UndefinedForNegativeU";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::ZeroProbabilityOutcome: return "ZeroProbabilityOutcome";
    case ErrorCode::MissingObserverData: return "MissingObserverData";
    case ErrorCode::WrongEventCount: return "WrongEventCount";
    case ErrorCode::NotAnEncounter: return "NotAnEncounter";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::IoFailure: return "IoFailure";
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

}  // namespace cdrop
