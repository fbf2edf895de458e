// Serial reference loop vs the OpenMP loop on a batch of short sine runs.

#include <benchmark/benchmark.h>

#include <numbers>

#include "pathfollow/batch.hpp"

using namespace pathfollow;

namespace {

std::vector<ScenarioConfig> batch(int n) {
  std::vector<ScenarioConfig> out;
  for (int i = 0; i < n; ++i) {
    ScenarioConfig c;
    c.path = SineGraph{300.0, std::numbers::pi / 800.0, 0.0, 10000.0};
    c.current = CurrentSchedule::constant(-0.4, 1.0, 1.08);
    c.initial = {10.0 + 25.0 * i, 200.0, std::numbers::pi / 2.0, 0.0, 0.0, 0.0};
    c.t_end = 50.0;
    c.log_every = 100;
    out.push_back(c);
  }
  return out;
}

void BM_Serial(benchmark::State& st) {
  const auto cfgs = batch(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(run_batch_serial(cfgs));
}

void BM_Parallel(benchmark::State& st) {
  const auto cfgs = batch(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(run_batch_parallel(cfgs));
}

}  // namespace

BENCHMARK(BM_Serial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Parallel)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
