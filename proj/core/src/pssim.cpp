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

#include "staleness/pssim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "staleness/errors.hpp"
#include "staleness/format.hpp"
#include "threshold_search.hpp"
#include "update_rules.hpp"
#include "verdict_tracker.hpp"

namespace staleness {

Scheduler Scheduler::round_robin(int workers) {
  if (workers < 1) throw DomainError("round robin needs at least one worker");
  return Scheduler(RoundRobin{workers});
}

Scheduler Scheduler::sampled_delay(DelayModel pmf, std::uint64_t seed) {
  if (pmf.is_constant()) throw DomainError("sampled-delay scheduler needs a pmf");
  return Scheduler(SampledDelay{std::move(pmf), seed});
}

int Scheduler::workers() const {
  if (const auto* rr = std::get_if<RoundRobin>(&kind_)) return rr->workers;
  throw DomainError("workers() on a sampled-delay scheduler");
}

const DelayModel& Scheduler::pmf() const {
  if (const auto* s = std::get_if<SampledDelay>(&kind_)) return s->pmf;
  throw DomainError("pmf() on a round-robin scheduler");
}

std::uint64_t Scheduler::seed() const {
  if (const auto* s = std::get_if<SampledDelay>(&kind_)) return s->seed;
  return 0;
}

int Scheduler::max_delay() const { return induced_delay().max_delay(); }

DelayModel Scheduler::induced_delay() const {
  if (const auto* rr = std::get_if<RoundRobin>(&kind_)) return DelayModel::constant(rr->workers - 1);
  return std::get<SampledDelay>(kind_).pmf;
}

std::string Scheduler::describe() const {
  if (const auto* rr = std::get_if<RoundRobin>(&kind_)) {
    return "round_robin(" + std::to_string(rr->workers) + ")";
  }
  return "sampled_delay(" + pmf().describe() + ", seed=" + std::to_string(seed()) + ")";
}

namespace {

struct Worker {
  Eigen::VectorXd snapshot;
  long snapshot_step = 0;
  Eigen::VectorXd velocity;
};

class Server {
 public:
  Server(const QuadraticProblem& problem, const OptimizerSpec& optimizer, std::uint64_t seed,
         const PSOptions& options)
      : problem_(problem), optimizer_(optimizer), options_(options), rng_(seed) {
    if (options.gradients == GradientMode::kSampled && !problem.has_components()) {
      throw DomainError("sampled gradients need per-sample components");
    }
    if (problem.has_components()) pick_ = std::uniform_int_distribution<std::size_t>(0, problem.component_count() - 1);
  }

  Eigen::VectorXd gradient_at(const Eigen::VectorXd& snapshot) {
    if (options_.gradients == GradientMode::kSampled) {
      return problem_.component_gradient(pick_(rng_), snapshot);
    }
    return problem_.gradient(snapshot);
  }

  // Applies g to the central parameters. `velocity` is the buffer that momentum
  // reads and overwrites: central for standard momentum, the worker's own for
  // shifted momentum.
  void apply(Eigen::VectorXd& x, Eigen::VectorXd& velocity, const Eigen::VectorXd& g) {
    if (optimizer_.variant() == Variant::kPlain) {
      detail::apply_plain(x, g, optimizer_.eta());
    } else {
      detail::apply_velocity(x, velocity, velocity, g, optimizer_.eta(), optimizer_.momentum());
    }
  }

 private:
  const QuadraticProblem& problem_;
  OptimizerSpec optimizer_;
  PSOptions options_;
  std::mt19937_64 rng_;
  std::uniform_int_distribution<std::size_t> pick_;
};

}  // namespace

PSRun run_ps(const QuadraticProblem& problem, const Scheduler& scheduler,
             const OptimizerSpec& optimizer, long steps, std::uint64_t seed,
             const PSOptions& options) {
  if (!(options.blowup_factor > 1.0 && options.decay_factor > 0.0 && options.decay_factor < 1.0)) {
    throw DomainError("run_ps: need blowup_factor > 1 > decay_factor > 0");
  }
  const bool round_robin = scheduler.is_round_robin();
  if (steps < 1 || (round_robin && steps < scheduler.workers())) {
    throw DomainError("run_ps: steps must cover at least one turn of every worker");
  }

  Server server(problem, optimizer, seed, options);
  const Eigen::VectorXd& xs = problem.minimum();
  Eigen::VectorXd x = xs + initial_displacement(problem, options.init);
  const double initial = (x - xs).norm();
  const int max_delay = scheduler.max_delay();
  detail::VerdictTracker tracker(initial, options.blowup_factor, options.decay_factor,
                                 max_delay + 2);

  PSRun run;
  run.norms.push_back(initial);
  if (options.record_states) run.verdict.states.push_back(x);
  const bool shifted = optimizer.variant() == Variant::kShiftedMomentum;
  Eigen::VectorXd central_velocity = Eigen::VectorXd::Zero(x.size());

  // Round robin: W workers, each holding the snapshot it will compute its next
  // gradient on. Sampled delay: a bounded record of past parameters (and
  // velocities) stands in for workers whose clocks are not modelled.
  std::vector<Worker> workers;
  std::vector<Eigen::VectorXd> past_x, past_v;
  std::mt19937_64 delay_rng(scheduler.seed());
  std::discrete_distribution<std::size_t> draw_delay;
  std::span<const PmfEntry> entries;
  if (round_robin) {
    workers.assign(static_cast<std::size_t>(scheduler.workers()),
                   Worker{x, 0, Eigen::VectorXd::Zero(x.size())});
    run.warmup_steps = scheduler.workers() - 1;
  } else {
    past_x.assign(static_cast<std::size_t>(max_delay + 2), x);
    past_v.assign(static_cast<std::size_t>(max_delay + 2), Eigen::VectorXd::Zero(x.size()));
    entries = scheduler.pmf().entries();
    std::vector<double> weights;
    for (const auto& e : entries) weights.push_back(e.probability);
    draw_delay = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
  }
  const auto ring = [&](long t) {
    const auto n = static_cast<long>(past_x.size());
    return static_cast<std::size_t>(t % n);
  };

  double norm = initial;
  long t = 0;
  for (; t < steps; ++t) {
    if (round_robin) {
      Worker& w = workers[static_cast<std::size_t>(t % static_cast<long>(workers.size()))];
      const Eigen::VectorXd g = server.gradient_at(w.snapshot);
      server.apply(x, shifted ? w.velocity : central_velocity, g);
      run.applied_delays.push_back(static_cast<int>(t - w.snapshot_step));
      w.snapshot = x;
      w.snapshot_step = t + 1;
    } else {
      long lag = entries[draw_delay(delay_rng)].delay;
      run.applied_delays.push_back(static_cast<int>(lag));
      if (lag > t) {
        lag = t;
        ++run.verdict.clipped_delays;
      }
      const Eigen::VectorXd g = server.gradient_at(past_x[ring(t - lag)]);
      Eigen::VectorXd& velocity = shifted ? past_v[ring(t + 1)] : central_velocity;
      if (shifted) velocity = past_v[ring(t - lag)];
      server.apply(x, velocity, g);
      past_x[ring(t + 1)] = x;
    }
    norm = (x - xs).norm();
    run.norms.push_back(norm);
    if (options.record_states) run.verdict.states.push_back(x);
    if (auto status = tracker.observe(norm)) {
      run.verdict.status = *status;
      if (*status == SimStatus::kDiverged) run.verdict.escape_step = t + 1;
      ++t;
      break;
    }
  }
  run.global_steps = t;
  run.verdict.steps = t;
  run.verdict.amplification = norm / initial;
  return run;
}

ThresholdResult ps_empirical_threshold(const QuadraticProblem& problem,
                                       const Scheduler& scheduler,
                                       const OptimizerFamily& family, double rel_tol) {
  family.validate();
  const double a = problem.sharpness();
  const long base_steps = empirical_probe_steps(scheduler.max_delay());
  auto stable = [&](double eta) {
    const OptimizerSpec opt(family, eta);
    auto run = run_ps(problem, scheduler, opt, base_steps, 0);
    if (run.verdict.status == SimStatus::kUndecided) {
      run = run_ps(problem, scheduler, opt, 2 * base_steps, 0);
      if (run.verdict.status == SimStatus::kUndecided) {
        throw UndecidedAtProbe("parameter-server run undecided at eta = " + format_double(eta), eta);
      }
    }
    return run.verdict.status == SimStatus::kConverged;
  };
  const double cap = kThresholdGainCap / ((1.0 - family.momentum) * a);
  const auto bracket =
      detail::find_threshold(stable, detail::kEmpiricalStartGain / a, cap, rel_tol,
                             kThresholdStartGain / a);

  ThresholdResult r;
  r.eta_star = 0.5 * (bracket.lo + bracket.hi);
  r.method = ThresholdMethod::kEmpiricalBisection;
  r.eta_lo = bracket.lo;
  r.eta_hi = bracket.hi;
  r.tolerance = rel_tol;
  r.family = family;
  r.delay = scheduler.induced_delay();
  r.sharpness = a;
  r.max_root_residual = std::nan("");
  r.probes = bracket.probes;
  return r;
}

std::vector<std::pair<int, double>> delay_histogram(const PSRun& run) {
  std::map<int, long> counts;
  long total = 0;
  for (std::size_t i = static_cast<std::size_t>(run.warmup_steps); i < run.applied_delays.size(); ++i) {
    ++counts[run.applied_delays[i]];
    ++total;
  }
  std::vector<std::pair<int, double>> out;
  for (const auto& [delay, count] : counts) {
    out.emplace_back(delay, static_cast<double>(count) / static_cast<double>(total));
  }
  return out;
}

std::string ps_trajectory_csv(const PSRun& run) {
  std::ostringstream out;
  out << "step,norm\n";
  for (std::size_t i = 0; i < run.norms.size(); ++i) out << i << ',' << format_double(run.norms[i]) << '\n';
  return out.str();
}

std::string delay_histogram_csv(const std::vector<std::pair<int, double>>& histogram) {
  std::ostringstream out;
  out << "delay,frequency\n";
  for (const auto& [delay, freq] : histogram) out << delay << ',' << format_double(freq) << '\n';
  return out.str();
}

}  // namespace staleness
