// Copyright 2026 The staleness-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "staleness/delay.hpp"
#include "staleness/stability.hpp"

namespace {

using namespace staleness;

void BM_NumericThresholdPlain(benchmark::State& state) {
  const auto delay = DelayModel::constant(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(numeric_threshold(OptimizerFamily::plain(), 1.0, delay));
  }
}
BENCHMARK(BM_NumericThresholdPlain)->Arg(1)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_NumericThresholdShifted(benchmark::State& state) {
  const auto delay = DelayModel::constant(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        numeric_threshold(OptimizerFamily::shifted_momentum(0.9), 1.0, delay));
  }
}
BENCHMARK(BM_NumericThresholdShifted)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_ThresholdCurvePlain(benchmark::State& state) {
  std::vector<int> taus;
  for (int t = 0; t <= 64; ++t) taus.push_back(t);
  const auto delays = constant_delays(taus);
  for (auto _ : state) {
    benchmark::DoNotOptimize(threshold_curve(OptimizerFamily::plain(), 1.0, delays));
  }
}
BENCHMARK(BM_ThresholdCurvePlain)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
