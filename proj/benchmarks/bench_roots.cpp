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

#include "staleness/charpoly.hpp"
#include "staleness/delay.hpp"
#include "staleness/roots.hpp"

namespace {

using namespace staleness;

void BM_AllRootsPlain(benchmark::State& state) {
  const int tau = static_cast<int>(state.range(0));
  const auto p = char_poly_plain(0.9 * 2.0 * std::sin(3.141592653589793 / (4 * tau + 2)), 1.0, tau);
  for (auto _ : state) benchmark::DoNotOptimize(all_roots(p));
  state.SetComplexityN(tau + 1);
}
BENCHMARK(BM_AllRootsPlain)->RangeMultiplier(2)->Range(1, 128)->Complexity();

void BM_AllRootsShifted(benchmark::State& state) {
  const int tau = static_cast<int>(state.range(0));
  const auto p = char_poly_shifted(0.05, 1.0, tau, 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(all_roots(p));
}
BENCHMARK(BM_AllRootsShifted)->Arg(4)->Arg(16)->Arg(64);

void BM_AllRootsGaussianPmf(benchmark::State& state) {
  const auto delay = pmf_discrete_gaussian(static_cast<int>(state.range(0)));
  const auto p = char_poly_stochastic(0.05, 1.0, delay);
  for (auto _ : state) benchmark::DoNotOptimize(all_roots(p));
}
BENCHMARK(BM_AllRootsGaussianPmf)->Arg(4)->Arg(16)->Arg(30);

}  // namespace

BENCHMARK_MAIN();
