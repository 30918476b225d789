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

#include "staleness/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "staleness/errors.hpp"
#include "staleness/format.hpp"
#include "threshold_search.hpp"
#include "update_rules.hpp"
#include "verdict_tracker.hpp"

namespace staleness {

std::string_view to_string(SimStatus status) noexcept {
  switch (status) {
    case SimStatus::kConverged:
      return "Converged";
    case SimStatus::kDiverged:
      return "Diverged";
    case SimStatus::kUndecided:
      return "Undecided";
  }
  return "unknown";
}

Eigen::VectorXd initial_displacement(const QuadraticProblem& problem, const InitSpec& init) {
  if (init.kind == InitKind::kTopEigvec) return problem.top_eigenvector();
  std::mt19937_64 rng(init.seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(problem.dimension());
  do {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

long SimConfig::resolved_max_steps() const {
  if (max_steps) return *max_steps;
  return std::max(100000L, 100L * (delay.max_delay() + 1));
}

int SimConfig::confirmation_window() const { return delay.max_delay() + 2; }

void SimConfig::validate() const {
  if (!(blowup_factor > 1.0 && decay_factor > 0.0 && decay_factor < 1.0)) {
    throw DomainError("SimConfig: need blowup_factor > 1 > decay_factor > 0");
  }
  if (max_steps && *max_steps < 1) throw DomainError("SimConfig: max_steps must be positive");
  if (record_every < 0) throw DomainError("SimConfig: record_every must be non-negative");
}

namespace {

// History of the delayed recurrence: x_t lives in slot t mod L. Slots are
// prefilled with x0 (and zero velocity), which is exactly the x_t = x0 for
// t <= 0 convention, as long as L exceeds the largest lookback.
class History {
 public:
  History(int length, const Eigen::VectorXd& x0)
      : x_(static_cast<std::size_t>(length), x0),
        v_(static_cast<std::size_t>(length), Eigen::VectorXd::Zero(x0.size())) {}

  Eigen::VectorXd& x(long t) { return x_[slot(t)]; }
  Eigen::VectorXd& v(long t) { return v_[slot(t)]; }

 private:
  std::size_t slot(long t) const {
    const auto n = static_cast<long>(x_.size());
    return static_cast<std::size_t>(((t % n) + n) % n);
  }

  std::vector<Eigen::VectorXd> x_;
  std::vector<Eigen::VectorXd> v_;
};

// One step of the chosen variant with gradient g taken `lag` steps in the past.
void advance(History& h, long t, long lag, const Eigen::VectorXd& g, const OptimizerSpec& opt) {
  Eigen::VectorXd& next = h.x(t + 1);
  next = h.x(t);
  switch (opt.variant()) {
    case Variant::kPlain:
      detail::apply_plain(next, g, opt.eta());
      break;
    case Variant::kMomentum:
      detail::apply_velocity(next, h.v(t + 1), h.v(t), g, opt.eta(), opt.momentum());
      break;
    case Variant::kShiftedMomentum:
      detail::apply_velocity(next, h.v(t + 1), h.v(t - lag), g, opt.eta(), opt.momentum());
      break;
  }
}

// Drives `step(t)` (which must fill x_{t+1}) and applies the verdict rules.
template <typename Step>
SimVerdict run_loop(const QuadraticProblem& problem, const SimConfig& config, History& history,
                    Step&& step) {
  const Eigen::VectorXd& xs = problem.minimum();
  const double initial = (history.x(0) - xs).norm();
  detail::VerdictTracker tracker(initial, config.blowup_factor, config.decay_factor,
                                 config.confirmation_window());
  SimVerdict verdict;
  if (config.record_every > 0) verdict.trace.push_back({0, initial});
  if (config.record_states) verdict.states.push_back(history.x(0));

  const long max_steps = config.resolved_max_steps();
  double norm = initial;
  long t = 0;
  for (; t < max_steps; ++t) {
    step(t);
    norm = (history.x(t + 1) - xs).norm();
    if (config.record_states) verdict.states.push_back(history.x(t + 1));
    if (config.record_every > 0 && (t + 1) % config.record_every == 0) {
      verdict.trace.push_back({t + 1, norm});
    }
    if (auto status = tracker.observe(norm)) {
      verdict.status = *status;
      if (*status == SimStatus::kDiverged) verdict.escape_step = t + 1;
      ++t;
      break;
    }
  }
  verdict.steps = t;
  verdict.amplification = norm / initial;
  if (config.record_every > 0 && verdict.trace.back().step != t) verdict.trace.push_back({t, norm});
  return verdict;
}

}  // namespace

SimVerdict simulate_expectation(const QuadraticProblem& problem, const SimConfig& config) {
  config.validate();
  const auto& opt = config.optimizer;
  const Eigen::VectorXd x0 = problem.minimum() + initial_displacement(problem, config.init);
  History history(config.delay.max_delay() + 2, x0);

  if (config.delay.is_constant()) {
    const long tau = config.delay.tau();
    return run_loop(problem, config, history, [&](long t) {
      const Eigen::VectorXd g = problem.gradient(history.x(t - tau));
      advance(history, t, tau, g, opt);
    });
  }

  if (opt.variant() != Variant::kPlain) {
    throw DomainError("expectation dynamics with stochastic delay need the plain variant");
  }
  const auto entries = config.delay.entries();
  Eigen::VectorXd blend(x0.size());
  return run_loop(problem, config, history, [&](long t) {
    blend.setZero();
    for (const auto& e : entries) blend += e.probability * history.x(t - e.delay);
    const Eigen::VectorXd g = problem.gradient(blend);
    advance(history, t, 0, g, opt);
  });
}

SimVerdict simulate_sgd(const QuadraticProblem& problem, const SimConfig& config,
                        std::uint64_t seed) {
  config.validate();
  if (!problem.has_components()) throw DomainError("simulate_sgd needs per-sample components");
  const auto& opt = config.optimizer;
  const Eigen::VectorXd x0 = problem.minimum() + initial_displacement(problem, config.init);
  History history(config.delay.max_delay() + 2, x0);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, problem.component_count() - 1);
  const auto entries = config.delay.entries();
  std::vector<double> weights;
  for (const auto& e : entries) weights.push_back(e.probability);
  std::discrete_distribution<std::size_t> draw_delay(weights.begin(), weights.end());
  const bool constant = config.delay.is_constant();
  const long tau = constant ? config.delay.tau() : 0;
  long clipped = 0;

  auto verdict = run_loop(problem, config, history, [&](long t) {
    long lag = tau;
    if (!constant) {
      lag = entries[draw_delay(rng)].delay;
      if (lag > t) {
        lag = t;
        ++clipped;
      }
    }
    const Eigen::VectorXd g = problem.component_gradient(pick(rng), history.x(t - lag));
    advance(history, t, lag, g, opt);
  });
  verdict.clipped_delays = clipped;
  return verdict;
}

namespace {

nlohmann::json delay_json(const DelayModel& delay) {
  nlohmann::json j;
  if (delay.is_constant()) {
    j["tau"] = delay.tau();
  } else {
    auto entries = nlohmann::json::array();
    for (const auto& e : delay.entries()) entries.push_back({e.delay, e.probability});
    j["pmf"] = entries;
  }
  j["expected_delay"] = delay.expected_delay();
  return j;
}

}  // namespace

std::string verdict_json(const SimVerdict& verdict, const SimConfig& config, int indent) {
  nlohmann::ordered_json j;
  j["status"] = std::string(to_string(verdict.status));
  j["escape_step"] = verdict.escape_step ? nlohmann::ordered_json(*verdict.escape_step)
                                         : nlohmann::ordered_json(nullptr);
  j["amplification"] = verdict.amplification;
  j["steps"] = verdict.steps;
  j["clipped_delays"] = verdict.clipped_delays;
  nlohmann::ordered_json cfg;
  cfg["variant"] = std::string(to_string(config.optimizer.variant()));
  cfg["eta"] = config.optimizer.eta();
  cfg["m"] = config.optimizer.momentum();
  cfg["delay"] = delay_json(config.delay);
  cfg["max_steps"] = config.resolved_max_steps();
  cfg["blowup_factor"] = config.blowup_factor;
  cfg["decay_factor"] = config.decay_factor;
  cfg["init"] = config.init.kind == InitKind::kTopEigvec ? "top_eigvec" : "random_unit";
  cfg["init_seed"] = config.init.seed;
  j["config"] = cfg;
  return j.dump(indent);
}

std::string trace_csv(const SimVerdict& verdict) {
  std::ostringstream out;
  out << "step,norm\n";
  for (const auto& p : verdict.trace) out << p.step << ',' << format_double(p.norm) << '\n';
  return out.str();
}

long empirical_probe_steps(int max_delay) noexcept {
  return std::max(2000000L, 1000L * (max_delay + 1));
}

ThresholdResult empirical_threshold(const QuadraticProblem& problem,
                                    const OptimizerFamily& family, const DelayModel& delay,
                                    double rel_tol, const SimConfig& base) {
  family.validate();
  const double a = problem.sharpness();
  const long budget = base.max_steps ? *base.max_steps : empirical_probe_steps(delay.max_delay());
  auto stable = [&](double eta) {
    SimConfig cfg = base;
    cfg.optimizer = OptimizerSpec(family, eta);
    cfg.delay = delay;
    cfg.max_steps = budget;
    cfg.record_every = 0;
    cfg.record_states = false;
    auto verdict = simulate_expectation(problem, cfg);
    if (verdict.status == SimStatus::kUndecided) {
      cfg.max_steps = 2 * budget;
      verdict = simulate_expectation(problem, cfg);
      if (verdict.status == SimStatus::kUndecided) {
        throw UndecidedAtProbe("simulation undecided at eta = " + format_double(eta), eta);
      }
    }
    return verdict.status == SimStatus::kConverged;
  };
  const double cap = kThresholdGainCap / ((1.0 - family.momentum) * a);
  const auto bracket = detail::find_threshold(stable, detail::kEmpiricalStartGain / a, cap,
                                              rel_tol, kThresholdStartGain / a);

  ThresholdResult r;
  r.eta_star = 0.5 * (bracket.lo + bracket.hi);
  r.method = ThresholdMethod::kEmpiricalBisection;
  r.eta_lo = bracket.lo;
  r.eta_hi = bracket.hi;
  r.tolerance = rel_tol;
  r.family = family;
  r.delay = delay;
  r.sharpness = a;
  r.max_root_residual = std::nan("");
  r.probes = bracket.probes;
  return r;
}

std::vector<EscapeRow> escape_time_curve(const QuadraticProblem& problem,
                                         const OptimizerFamily& family,
                                         const DelayModel& delay, std::span<const double> etas,
                                         const SimConfig& base) {
  if (!std::is_sorted(etas.begin(), etas.end())) {
    throw DomainError("escape_time_curve: learning rates must be ascending");
  }
  std::vector<EscapeRow> rows;
  for (double eta : etas) {
    SimConfig cfg = base;
    cfg.optimizer = OptimizerSpec(family, eta);
    cfg.delay = delay;
    const auto verdict = simulate_expectation(problem, cfg);
    rows.push_back({eta, verdict.status, verdict.escape_step});
  }
  return rows;
}

std::string escape_curve_csv(std::span<const EscapeRow> rows) {
  std::ostringstream out;
  out << "eta,escape_step\n";
  for (const auto& row : rows) {
    out << format_double(row.eta) << ',';
    if (row.escape_step) out << *row.escape_step;
    out << '\n';
  }
  return out.str();
}

PowerIterationResult power_iteration(const MatVec& matvec, int dimension, double tol,
                                     int max_iter, std::uint64_t seed) {
  if (dimension < 1) throw DomainError("power_iteration: dimension must be >= 1");
  if (!(tol > 0.0) || max_iter < 1) throw DomainError("power_iteration: bad tolerance or cap");
  // Own stream: a plain mt19937_64(seed) start vector coincides with the first
  // draws of any other generator seeded the same way (e.g. random_spd_matrix).
  std::seed_seq seq{seed, std::uint64_t{0x706f776572}};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(dimension);
  do {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
  } while (v.norm() == 0.0);
  v.normalize();

  Eigen::VectorXd w = matvec(v);
  double estimate = v.dot(w);
  for (int iter = 1; iter <= max_iter; ++iter) {
    const double w_norm = w.norm();
    if (w_norm == 0.0) return {0.0, iter};
    v = w / w_norm;
    w = matvec(v);
    const double next = v.dot(w);
    if (std::abs(next - estimate) <= tol * std::abs(next)) return {next, iter};
    estimate = next;
  }
  throw NoConvergence("power_iteration: no convergence after " + std::to_string(max_iter) +
                          " iterations",
                      max_iter, {}, estimate);
}

}  // namespace staleness
