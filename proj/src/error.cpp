#include "phasefrac/error.hpp"

namespace phasefrac {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::DimensionOutOfRange: return "DimensionOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnnormalizedState: return "UnnormalizedState";
    case ErrorCode::StepCountTooSmall: return "StepCountTooSmall";
    case ErrorCode::PhaseResolutionExceeded: return "PhaseResolutionExceeded";
    case ErrorCode::NodeEncountered: return "NodeEncountered";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::RangeMismatch: return "RangeMismatch";
    case ErrorCode::TimeDependentScheduleUnsupported: return "TimeDependentScheduleUnsupported";
    case ErrorCode::TanDivergence: return "TanDivergence";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace phasefrac
