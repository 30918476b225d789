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

#include <gtest/gtest.h>

#include <cmath>

#include "staleness/errors.hpp"
#include "oracles.hpp"

namespace staleness {
namespace {

OptimizerSpec Make(int variant, double eta, double m) {
  switch (variant) {
    case 0:
      return OptimizerSpec::plain(eta);
    case 1:
      return OptimizerSpec::momentum(eta, m);
    default:
      return OptimizerSpec::shifted(eta, m);
  }
}

std::vector<Eigen::VectorXd> ConstantDelayStates(const QuadraticProblem& p,
                                                 const OptimizerSpec& opt, int tau, long steps) {
  SimConfig cfg;
  cfg.optimizer = opt;
  cfg.delay = DelayModel::constant(tau);
  cfg.max_steps = steps;
  cfg.record_states = true;
  cfg.blowup_factor = 1e300;
  cfg.decay_factor = 1e-300;
  return simulate_expectation(p, cfg).states;
}

TEST(Scheduler, Basics) {
  const auto rr = Scheduler::round_robin(8);
  EXPECT_TRUE(rr.is_round_robin());
  EXPECT_EQ(rr.workers(), 8);
  EXPECT_EQ(rr.induced_delay().tau(), 7);
  EXPECT_EQ(rr.describe(), "round_robin(8)");
  EXPECT_THROW(rr.pmf(), DomainError);
  EXPECT_THROW(Scheduler::round_robin(0), DomainError);

  const auto sd = Scheduler::sampled_delay(pmf_uniform(1, 4), 3);
  EXPECT_FALSE(sd.is_round_robin());
  EXPECT_EQ(sd.max_delay(), 4);
  EXPECT_EQ(sd.seed(), 3u);
  EXPECT_THROW(sd.workers(), DomainError);
  EXPECT_THROW(Scheduler::sampled_delay(DelayModel::constant(3), 1), DomainError);
}

TEST(RunPs, RoundRobinEqualsConstantDelay) {
  PSOptions opts;
  opts.record_states = true;
  opts.blowup_factor = 1e300;
  opts.decay_factor = 1e-300;
  for (const auto& p : {QuadraticProblem::scalar(1.0),
                        QuadraticProblem::from_hessian(random_spd_matrix(5, 2))}) {
    for (int w : {1, 2, 5, 9, 17}) {
      for (int variant = 0; variant < 3; ++variant) {
        const auto opt = Make(variant, 0.4 * analytic_threshold_plain(p.sharpness(), w - 1), 0.9);
        const auto run = run_ps(p, Scheduler::round_robin(w), opt, 600, 0, opts);
        const auto want = ConstantDelayStates(p, opt, w - 1, 600);
        ASSERT_EQ(run.verdict.states.size(), want.size());
        for (std::size_t t = 0; t < want.size(); ++t) {
          ASSERT_LE((run.verdict.states[t] - want[t]).lpNorm<Eigen::Infinity>(), 1e-12)
              << "W=" << w << " variant=" << variant << " t=" << t;
        }
      }
    }
  }
}

TEST(RunPs, ShiftedMomentumMatchesRawRecurrence) {
  PSOptions opts;
  opts.blowup_factor = 1e300;
  opts.decay_factor = 1e-300;
  const auto run = run_ps(QuadraticProblem::scalar(1.0), Scheduler::round_robin(9),
                          OptimizerSpec::shifted(0.05, 0.9), 500, 0, opts);
  const double want = oracle::scalar_recurrence_final(2, 0.05, 1.0, 8, 0.9, 500);
  EXPECT_NEAR(run.norms.back(), want, 1e-12 * std::max(1.0, want));
}

TEST(RunPs, RoundRobinDelaysAndHistogram) {
  const auto run = run_ps(QuadraticProblem::scalar(1.0), Scheduler::round_robin(8),
                          OptimizerSpec::plain(0.01), 200, 0);
  EXPECT_EQ(run.warmup_steps, 7);
  for (int t = 0; t < 7; ++t) EXPECT_EQ(run.applied_delays[t], t);
  for (std::size_t t = 7; t < run.applied_delays.size(); ++t) EXPECT_EQ(run.applied_delays[t], 7);
  const auto hist = delay_histogram(run);
  ASSERT_EQ(hist.size(), 1u);
  EXPECT_EQ(hist[0].first, 7);
  EXPECT_DOUBLE_EQ(hist[0].second, 1.0);
  EXPECT_EQ(delay_histogram_csv(hist), "delay,frequency\n7,1\n");
  const auto csv = ps_trajectory_csv(run);
  EXPECT_EQ(csv.substr(0, 10), "step,norm\n");
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')),
            run.norms.size() + 1);
}

TEST(RunPs, SampledDelayHistogramMatchesPmf) {
  const auto pmf = pmf_discrete_gaussian(4);
  PSOptions opts;
  opts.blowup_factor = 1e300;
  opts.decay_factor = 1e-300;
  const auto run = run_ps(QuadraticProblem::scalar(1.0), Scheduler::sampled_delay(pmf, 21),
                          OptimizerSpec::plain(0.01), 100000, 0, opts);
  const auto hist = delay_histogram(run);
  double tv = 0.0;
  for (const auto& e : pmf.entries()) {
    double got = 0.0;
    for (const auto& [d, f] : hist) {
      if (d == e.delay) got = f;
    }
    tv += std::abs(got - e.probability);
  }
  EXPECT_LE(0.5 * tv, 0.02);
  EXPECT_GT(run.verdict.clipped_delays, 0);

  const auto uni = run_ps(QuadraticProblem::scalar(1.0),
                          Scheduler::sampled_delay(pmf_uniform(1, 4), 5),
                          OptimizerSpec::plain(0.01), 40000, 0, opts);
  const auto uh = delay_histogram(uni);
  ASSERT_EQ(uh.size(), 4u);
  for (const auto& [d, f] : uh) EXPECT_NEAR(f, 0.25, 0.015) << d;
}

TEST(RunPs, SampledDelaySeededDeterminism) {
  const auto sched = Scheduler::sampled_delay(pmf_uniform(1, 6), 8);
  const auto p = QuadraticProblem::scalar(1.0);
  const auto a = run_ps(p, sched, OptimizerSpec::shifted(0.05, 0.5), 3000, 1);
  const auto b = run_ps(p, sched, OptimizerSpec::shifted(0.05, 0.5), 3000, 1);
  EXPECT_EQ(a.applied_delays, b.applied_delays);
  EXPECT_EQ(a.norms, b.norms);
  const auto c = run_ps(p, Scheduler::sampled_delay(pmf_uniform(1, 6), 9),
                        OptimizerSpec::shifted(0.05, 0.5), 3000, 1);
  EXPECT_NE(a.applied_delays, c.applied_delays);
}

TEST(RunPs, SampledGradients) {
  Eigen::MatrixXd a1(1, 1), a2(1, 1);
  a1 << 0.5;
  a2 << 1.5;
  const auto p = QuadraticProblem::from_components({a1, a2});
  PSOptions opts;
  opts.gradients = GradientMode::kSampled;
  const auto run = run_ps(p, Scheduler::round_robin(5), OptimizerSpec::plain(3.0), 1000, 4, opts);
  EXPECT_EQ(run.verdict.status, SimStatus::kDiverged);
  EXPECT_THROW(run_ps(QuadraticProblem::scalar(1.0), Scheduler::round_robin(2),
                      OptimizerSpec::plain(0.1), 10, 0, opts),
               DomainError);
}

TEST(RunPs, Verdicts) {
  const auto p = QuadraticProblem::scalar(1.0);
  const double eta_star = analytic_threshold_plain(1.0, 4);
  EXPECT_EQ(run_ps(p, Scheduler::round_robin(5), OptimizerSpec::plain(0.9 * eta_star), 200000, 0)
                .verdict.status,
            SimStatus::kConverged);
  const auto div =
      run_ps(p, Scheduler::round_robin(5), OptimizerSpec::plain(1.1 * eta_star), 200000, 0);
  EXPECT_EQ(div.verdict.status, SimStatus::kDiverged);
  EXPECT_TRUE(div.verdict.escape_step.has_value());
  EXPECT_THROW(run_ps(p, Scheduler::round_robin(5), OptimizerSpec::plain(0.1), 4, 0), DomainError);
}

TEST(PsThreshold, RoundRobinMatchesAnalytic) {
  const auto p = QuadraticProblem::scalar(1.0);
  for (int w : {1, 2, 5, 9}) {
    const auto r = ps_empirical_threshold(p, Scheduler::round_robin(w), OptimizerFamily::plain());
    const double want = analytic_threshold_plain(1.0, w - 1);
    EXPECT_NEAR(r.eta_star, want, 0.02 * want) << "W=" << w;
    EXPECT_EQ(r.delay.tau(), w - 1);
  }
}

TEST(PsThreshold, SampledUniformMatchesStochasticRoots) {
  const auto pmf = pmf_uniform(1, 9);
  const auto r = ps_empirical_threshold(QuadraticProblem::scalar(1.0),
                                        Scheduler::sampled_delay(pmf, 1), OptimizerFamily::plain());
  const double want = numeric_threshold(OptimizerFamily::plain(), 1.0, pmf).eta_star;
  EXPECT_NEAR(r.eta_star, want, 0.1 * want);
}

}  // namespace
}  // namespace staleness
