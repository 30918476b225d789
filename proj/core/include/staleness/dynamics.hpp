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

#ifndef STALENESS_DYNAMICS_HPP
#define STALENESS_DYNAMICS_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "staleness/delay.hpp"
#include "staleness/optimizer.hpp"
#include "staleness/quadratic.hpp"
#include "staleness/stability.hpp"

namespace staleness {

enum class InitKind { kTopEigvec, kRandomUnit };

/// Initial displacement x0 - x*, always of unit norm.
struct InitSpec {
  InitKind kind = InitKind::kTopEigvec;
  std::uint64_t seed = 0;

  static InitSpec top_eigvec() { return {}; }
  static InitSpec random_unit(std::uint64_t seed) { return {InitKind::kRandomUnit, seed}; }
};

Eigen::VectorXd initial_displacement(const QuadraticProblem& problem, const InitSpec& init);

struct SimConfig {
  OptimizerSpec optimizer = OptimizerSpec::plain(0.0);
  DelayModel delay = DelayModel::constant(0);
  /// Defaults to max(1e5, 100 (tau_max + 1)).
  std::optional<long> max_steps;
  double blowup_factor = 1e6;
  double decay_factor = 1e-6;
  InitSpec init;
  /// Keep every n-th norm in the trace; 0 keeps none.
  int record_every = 0;
  /// Keep the full parameter vector at every step (tests and PS comparisons).
  bool record_states = false;

  long resolved_max_steps() const;
  /// Consecutive sub-decay steps required to call a run Converged: tau_max + 2.
  int confirmation_window() const;
  void validate() const;
};

enum class SimStatus { kConverged, kDiverged, kUndecided };

std::string_view to_string(SimStatus status) noexcept;

struct TracePoint {
  long step;
  double norm;
};

struct SimVerdict {
  SimStatus status = SimStatus::kUndecided;
  /// First step whose distance to x* exceeds blowup_factor times the initial one.
  std::optional<long> escape_step;
  /// Final distance to x* over the initial distance.
  double amplification = 1.0;
  /// Steps actually taken.
  long steps = 0;
  /// Sampled delays that exceeded the elapsed step count and were clipped.
  long clipped_delays = 0;
  std::vector<TracePoint> trace;
  std::vector<Eigen::VectorXd> states;
};

/// Verdict record: status, escape_step, amplification, steps, clipped_delays and
/// an echo of the configuration.
std::string verdict_json(const SimVerdict& verdict, const SimConfig& config, int indent = 2);
/// "step,norm" rows.
std::string trace_csv(const SimVerdict& verdict);

/// Iterates the expected (noise-free) delayed dynamics. A pmf delay uses the
/// mass-weighted update x_{t+1} = x_t - eta H sum_k p_k (x_{t-k} - x*) and is
/// only defined for the plain variant. History before t = 0 is held at x0.
SimVerdict simulate_expectation(const QuadraticProblem& problem, const SimConfig& config);

/// Stochastic delayed SGD: each step uses one uniformly drawn component Hessian
/// and, for a pmf delay, one sampled delay. Bit-identical for equal seeds.
SimVerdict simulate_sgd(const QuadraticProblem& problem, const SimConfig& config,
                        std::uint64_t seed);

/// Bisection on eta over "simulate_expectation converges". An Undecided probe
/// is retried once with twice the step budget, then UndecidedAtProbe is thrown.
/// Step budget of one threshold probe when the caller sets none. Decay or
/// blow-up by 1e6 takes ~1e6 steps for shifted momentum (m = 0.9, tau = 16)
/// half a percent away from its threshold.
long empirical_probe_steps(int max_delay) noexcept;

/// Bisection on eta of simulate_expectation == Converged. Starts at
/// eta a = 0.75 and searches both ways; an Undecided probe is retried once
/// with twice the budget, then UndecidedAtProbe is thrown.
ThresholdResult empirical_threshold(const QuadraticProblem& problem,
                                    const OptimizerFamily& family, const DelayModel& delay,
                                    double rel_tol = 0.02, const SimConfig& base = {});

struct EscapeRow {
  double eta = 0.0;
  SimStatus status = SimStatus::kUndecided;
  std::optional<long> escape_step;
};

/// Escape step per learning rate; eta values must be ascending.
std::vector<EscapeRow> escape_time_curve(const QuadraticProblem& problem,
                                         const OptimizerFamily& family,
                                         const DelayModel& delay,
                                         std::span<const double> etas,
                                         const SimConfig& base = {});
/// "eta,escape_step" rows; escape_step empty when the run did not escape.
std::string escape_curve_csv(std::span<const EscapeRow> rows);

using MatVec = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct PowerIterationResult {
  double lambda_max = 0.0;
  int iterations = 0;
};

/// Dominant eigenvalue of a symmetric PSD operator by power iteration with
/// Rayleigh-quotient estimates, stopping when successive estimates agree to
/// `tol` relative. Throws NoConvergence carrying the last estimate.
PowerIterationResult power_iteration(const MatVec& matvec, int dimension,
                                     double tol = 1e-10, int max_iter = 100000,
                                     std::uint64_t seed = 0);

}  // namespace staleness

#endif  // STALENESS_DYNAMICS_HPP
