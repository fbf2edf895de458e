#include "pathfollow/error.hpp"

namespace pathfollow {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NonPositiveDeterminant: return "NonPositiveDeterminant";
    case ErrorCode::AssumptionYViolated: return "AssumptionYViolated";
    case ErrorCode::SpeedMarginViolated: return "SpeedMarginViolated";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::CurvatureTooHigh: return "CurvatureTooHigh";
    case ErrorCode::MuTooSmall: return "MuTooSmall";
    case ErrorCode::SingularAllocation: return "SingularAllocation";
    case ErrorCode::SidewaysCurrentTooStrong: return "SidewaysCurrentTooStrong";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::ConditionOneViolated: return "ConditionOneViolated";
    case ErrorCode::NonFiniteDerivative: return "NonFiniteDerivative";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::EmptyLog: return "EmptyLog";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace pathfollow
