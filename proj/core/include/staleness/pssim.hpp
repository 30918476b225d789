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

#ifndef STALENESS_PSSIM_HPP
#define STALENESS_PSSIM_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "staleness/delay.hpp"
#include "staleness/dynamics.hpp"
#include "staleness/optimizer.hpp"
#include "staleness/quadratic.hpp"
#include "staleness/stability.hpp"

namespace staleness {

/// Order in which worker gradients reach the parameter server.
class Scheduler {
 public:
  struct RoundRobin {
    int workers;
  };
  struct SampledDelay {
    DelayModel pmf;
    std::uint64_t seed;
  };

  /// W workers served in fixed order: every gradient is W - 1 updates old.
  static Scheduler round_robin(int workers);
  /// Each update applies a gradient taken k updates ago, k drawn from the pmf.
  static Scheduler sampled_delay(DelayModel pmf, std::uint64_t seed);

  bool is_round_robin() const noexcept {
    return std::holds_alternative<RoundRobin>(kind_);
  }
  int workers() const;
  const DelayModel& pmf() const;
  std::uint64_t seed() const;
  int max_delay() const;
  /// The delay model the schedule realizes (constant W - 1 for round robin).
  DelayModel induced_delay() const;
  std::string describe() const;

 private:
  explicit Scheduler(std::variant<RoundRobin, SampledDelay> kind) : kind_(std::move(kind)) {}

  std::variant<RoundRobin, SampledDelay> kind_;
};

enum class GradientMode { kExpectation, kSampled };

struct PSOptions {
  GradientMode gradients = GradientMode::kExpectation;
  double blowup_factor = 1e6;
  double decay_factor = 1e-6;
  InitSpec init;
  bool record_states = false;
};

struct PSRun {
  long global_steps = 0;
  /// Staleness of the gradient applied at each step.
  std::vector<int> applied_delays;
  /// Leading steps whose gradients were taken from the initial snapshot.
  int warmup_steps = 0;
  /// Distance to x* before the first update and after each one.
  std::vector<double> norms;
  SimVerdict verdict;
};

/// Single-threaded event loop emulating an asynchronous parameter server.
/// Standard momentum keeps one velocity at the server; shifted momentum gives
/// every worker its own velocity buffer. Runs until `steps` updates or an
/// early Converged/Diverged verdict.
PSRun run_ps(const QuadraticProblem& problem, const Scheduler& scheduler,
             const OptimizerSpec& optimizer, long steps, std::uint64_t seed,
             const PSOptions& options = {});

/// Bisection on eta over "run_ps converges" with exact gradients.
ThresholdResult ps_empirical_threshold(const QuadraticProblem& problem,
                                       const Scheduler& scheduler,
                                       const OptimizerFamily& family,
                                       double rel_tol = 0.02);

/// Empirical pmf of applied delays after warm-up, ascending by delay.
std::vector<std::pair<int, double>> delay_histogram(const PSRun& run);

/// "step,norm" rows for a PS run.
std::string ps_trajectory_csv(const PSRun& run);
/// "delay,frequency" rows.
std::string delay_histogram_csv(const std::vector<std::pair<int, double>>& histogram);

}  // namespace staleness

#endif  // STALENESS_PSSIM_HPP
