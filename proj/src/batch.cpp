#include "pathfollow/batch.hpp"

#include <omp.h>

namespace pathfollow {

RunOutcome run_guarded(const ScenarioConfig& cfg) {
  RunOutcome out;
  try {
    out.result = run_scenario(cfg);
  } catch (const Error& e) {
    out.error = e.code();
    out.message = e.detail();
  } catch (const std::exception& e) {
    out.error = ErrorCode::InvalidParameter;
    out.message = e.what();
  }
  return out;
}

std::vector<RunOutcome> run_batch_serial(std::span<const ScenarioConfig> configs) {
  std::vector<RunOutcome> out(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) out[i] = run_guarded(configs[i]);
  return out;
}

std::vector<RunOutcome> run_batch_parallel(std::span<const ScenarioConfig> configs, int threads) {
  std::vector<RunOutcome> out(configs.size());
  const auto n = static_cast<long>(configs.size());
  const int nt = threads > 0 ? threads : omp_get_max_threads();
  // each slot written by exactly one iteration; runs share nothing mutable
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
  for (long i = 0; i < n; ++i) out[i] = run_guarded(configs[i]);
  return out;
}

}  // namespace pathfollow
