#include "evsheaf/error.hpp"

namespace evsheaf {

const char* error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::WindowOutOfRange: return "WindowOutOfRange";
    case ErrorCode::IncompatibleSections: return "IncompatibleSections";
    case ErrorCode::InvalidPhase: return "InvalidPhase";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::ZeroLength: return "ZeroLength";
    case ErrorCode::NonFiniteResult: return "NonFiniteResult";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::InsufficientLead: return "InsufficientLead";
    case ErrorCode::FixedPointViolation: return "FixedPointViolation";
    case ErrorCode::SeedLengthMismatch: return "SeedLengthMismatch";
    case ErrorCode::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::NonPositiveIntensity: return "NonPositiveIntensity";
    case ErrorCode::NonMonotoneTime: return "NonMonotoneTime";
    case ErrorCode::DegenerateScene: return "DegenerateScene";
    case ErrorCode::ThresholdViolation: return "ThresholdViolation";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(what), code_(code) {}

}  // namespace evsheaf
