#pragma once

// Subcommands behind the pathfollow executable. Output streams are passed in
// so the commands can be driven from tests.

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "pathfollow/error.hpp"

namespace pathfollow::cli {

// Stable exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInternal = 1;
inline constexpr int kUsage = 2;  // bad flags, unreadable or invalid config
inline constexpr int kInvalidParameter = 3;
inline constexpr int kNonPositiveDeterminant = 10;
inline constexpr int kAssumptionYViolated = 11;
inline constexpr int kSpeedMarginViolated = 12;
inline constexpr int kAssumptionViolated = 13;
inline constexpr int kCurvatureTooHigh = 14;
inline constexpr int kMuTooSmall = 15;
inline constexpr int kConditionOneViolated = 20;
inline constexpr int kNonFinite = 21;
inline constexpr int kSidewaysCurrent = 22;
inline constexpr int kSingularAllocation = 23;
inline constexpr int kSweepFailed = 30;

int exit_code(ErrorCode code);

struct Options {
  std::filesystem::path config;
  std::filesystem::path out{"out"};
  std::vector<std::string> overrides;  // key=value, applied in order
  int threads{0};
};

/// Overrides from --dt / --t-end, appended after the --set list.
void add_step_overrides(Options& o, const double* dt, const double* t_end);

int cmd_run(const Options& o, std::ostream& out, std::ostream& err);
int cmd_check(const Options& o, std::ostream& out, std::ostream& err);
int cmd_sweep(const Options& o, const std::string& key, const std::vector<std::string>& values,
              std::ostream& out, std::ostream& err);

}  // namespace pathfollow::cli
