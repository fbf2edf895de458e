#pragma once

// Independent scenario runs: a serial reference loop and an OpenMP loop.
// Both must produce bit-identical results for the same inputs.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pathfollow/error.hpp"
#include "pathfollow/sim.hpp"

namespace pathfollow {

struct RunOutcome {
  std::optional<ErrorCode> error;  // empty on success
  std::string message;
  SimResult result;

  bool ok() const { return !error.has_value(); }
};

/// Never throws for per-run failures; they land in RunOutcome::error.
std::vector<RunOutcome> run_batch_serial(std::span<const ScenarioConfig> configs);

/// threads <= 0 uses the OpenMP default.
std::vector<RunOutcome> run_batch_parallel(std::span<const ScenarioConfig> configs,
                                           int threads = 0);

/// Single guarded run, shared by both loops.
RunOutcome run_guarded(const ScenarioConfig& cfg);

}  // namespace pathfollow
