#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pathfollow {

enum class ErrorCode {
  InvalidParameter,
  NonPositiveDeterminant,
  AssumptionYViolated,
  SpeedMarginViolated,
  AssumptionViolated,
  CurvatureTooHigh,
  MuTooSmall,
  SingularAllocation,
  SidewaysCurrentTooStrong,
  IllConditioned,
  ConditionOneViolated,
  NonFiniteDerivative,
  NonFiniteState,
  EmptyLog,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a stable, machine-checkable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace pathfollow
