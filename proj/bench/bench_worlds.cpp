// Copyright 2026 The Trialoffer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference vs OpenMP world loop on the 50-song setting.
//
//   bench_worlds --benchmark_filter=Parallel

#include <benchmark/benchmark.h>
#include <omp.h>

#include "trialoffer/scenario.hpp"
#include "trialoffer/simulator.hpp"

namespace {

using namespace trialoffer;

SimulationConfig bench_config(PolicyKind policy) {
  ExperimentConfig cfg = default_experiment_config();
  cfg.steps = 5000;
  cfg.worlds = 16;
  cfg.policy = policy;
  cfg.granularity = TraceGranularity::Final;
  return cfg.resolve();
}

void BM_Serial(benchmark::State& state) {
  const auto cfg = bench_config(static_cast<PolicyKind>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment_serial(cfg));
  state.SetItemsProcessed(state.iterations() * cfg.worlds * cfg.steps);
  state.SetLabel(std::string(to_string(cfg.schedule.kind)));
}

void BM_Parallel(benchmark::State& state) {
  const auto cfg = bench_config(static_cast<PolicyKind>(state.range(0)));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(cfg, threads));
  state.SetItemsProcessed(state.iterations() * cfg.worlds * cfg.steps);
  state.SetLabel(std::string(to_string(cfg.schedule.kind)) + " threads=" +
                 std::to_string(threads));
}

void thread_args(benchmark::internal::Benchmark* b) {
  const int max_threads = omp_get_max_threads();
  for (int policy : {0, 2}) {
    for (int t = 1; t <= max_threads; t *= 2) b->Args({policy, t});
    if ((max_threads & (max_threads - 1)) != 0) b->Args({policy, max_threads});
  }
}

}  // namespace

BENCHMARK(BM_Serial)->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->Apply(thread_args)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
