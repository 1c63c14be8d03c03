#pragma once

#include <stdexcept>
#include <string>

namespace evsheaf {

enum class ErrorCode {
  InvalidArgument,
  WindowOutOfRange,
  IncompatibleSections,
  InvalidPhase,
  LengthMismatch,
  OutOfDomain,
  ZeroLength,
  NonFiniteResult,
  KindMismatch,
  InsufficientLead,
  FixedPointViolation,
  SeedLengthMismatch,
  EnumerationBudgetExceeded,
  NonFiniteState,
  NonPositiveIntensity,
  NonMonotoneTime,
  DegenerateScene,
  ThresholdViolation,
  Overflow,
  ConfigError,
};

const char* error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }
  const char* name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace evsheaf
