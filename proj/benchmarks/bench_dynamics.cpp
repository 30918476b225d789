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

#include "staleness/dynamics.hpp"
#include "staleness/pssim.hpp"
#include "staleness/quadratic.hpp"

namespace {

using namespace staleness;

void BM_SimulateExpectationScalar(benchmark::State& state) {
  const auto problem = QuadraticProblem::scalar(1.0);
  SimConfig cfg;
  cfg.optimizer = OptimizerSpec::plain(1e-4);
  cfg.delay = DelayModel::constant(static_cast<int>(state.range(0)));
  cfg.max_steps = 100000;
  cfg.decay_factor = 1e-300;  // run the full budget
  for (auto _ : state) benchmark::DoNotOptimize(simulate_expectation(problem, cfg));
  state.SetItemsProcessed(state.iterations() * *cfg.max_steps);
}
BENCHMARK(BM_SimulateExpectationScalar)->Arg(1)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SimulateExpectationDense(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto problem = QuadraticProblem::from_hessian(random_spd_matrix(d, 7));
  SimConfig cfg;
  cfg.optimizer = OptimizerSpec::momentum(0.001, 0.5);
  cfg.delay = DelayModel::constant(8);
  cfg.max_steps = 10000;
  cfg.decay_factor = 1e-300;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_expectation(problem, cfg));
  state.SetItemsProcessed(state.iterations() * *cfg.max_steps);
}
BENCHMARK(BM_SimulateExpectationDense)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_RoundRobinPs(benchmark::State& state) {
  const auto problem = QuadraticProblem::scalar(1.0);
  const auto scheduler = Scheduler::round_robin(static_cast<int>(state.range(0)));
  PSOptions options;
  options.decay_factor = 1e-300;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_ps(problem, scheduler, OptimizerSpec::plain(1e-4), 100000, 0, options));
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_RoundRobinPs)->Arg(2)->Arg(17)->Unit(benchmark::kMillisecond);

void BM_PowerIteration(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Eigen::MatrixXd h = random_spd_matrix(d, 11);
  const MatVec mv = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return h * v; };
  for (auto _ : state) benchmark::DoNotOptimize(power_iteration(mv, d));
}
BENCHMARK(BM_PowerIteration)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
