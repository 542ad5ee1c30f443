#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phasefrac {

enum class ErrorCode {
  NonHermitianInput,
  NumericalFailure,
  DimensionOutOfRange,
  DimensionMismatch,
  UnnormalizedState,
  StepCountTooSmall,
  PhaseResolutionExceeded,
  NodeEncountered,
  InsufficientSamples,
  RangeMismatch,
  TimeDependentScheduleUnsupported,
  TanDivergence,
  ParamOutOfRange,
  InvalidArgument,
  ParseError,
};

std::string_view error_code_name(ErrorCode code);

// Carries a machine-readable code; the CLI maps codes onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace phasefrac
