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

#include "staleness/stability.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "staleness/charpoly.hpp"
#include "staleness/errors.hpp"
#include "staleness/roots.hpp"
#include "oracles.hpp"

namespace staleness {
namespace {

double NumericEta(const OptimizerFamily& f, int tau, double a = 1.0) {
  return numeric_threshold(f, a, DelayModel::constant(tau)).eta_star;
}

TEST(AnalyticThreshold, Examples) {
  EXPECT_DOUBLE_EQ(analytic_threshold_plain(1.0, 0), 2.0);
  EXPECT_NEAR(analytic_threshold_plain(1.0, 1), 1.0, 1e-15);
  EXPECT_NEAR(analytic_threshold_plain(1.0, 32), 0.048327490472264577, 1e-15);
  EXPECT_NEAR(analytic_threshold_plain(1.0, 8), 0.18453671892660399, 1e-15);
  EXPECT_NEAR(analytic_threshold_plain(4.0, 8), 0.18453671892660399 / 4.0, 1e-15);
  EXPECT_THROW(analytic_threshold_plain(0.0, 1), DomainError);
}

TEST(TaylorThreshold, Examples) {
  EXPECT_NEAR(taylor_inverse_threshold(1), 0.954929658551372, 1e-14);
  EXPECT_NEAR(taylor_inverse_threshold(64), 41.061975317709, 1e-11);
  EXPECT_NEAR(std::abs(1.0 / analytic_threshold_plain(1.0, 1) - taylor_inverse_threshold(1)),
              0.04507034145, 1e-10);
  for (int tau = 1; tau < 64; ++tau) {
    EXPECT_LT(taylor_inverse_threshold(tau), taylor_inverse_threshold(tau + 1));
    EXPECT_LT(std::abs(1.0 / analytic_threshold_plain(1.0, tau) - taylor_inverse_threshold(tau)),
              0.05);
  }
  EXPECT_THROW(taylor_inverse_threshold(0), DomainError);
}

TEST(ScaleLr, Examples) {
  EXPECT_NEAR(scale_lr(0.3, 0), std::numbers::pi * 0.3 / 2.0, 1e-15);
  EXPECT_NEAR(scale_lr(0.8, 8), 0.0739198271432893, 1e-15);
  // Calibrated at tau = 0 (a eta0 = 2), the rule tracks the exact threshold.
  const double eta0 = 0.5;
  const double a = 2.0 / eta0;
  for (int tau = 1; tau <= 64; ++tau) {
    EXPECT_NEAR(scale_lr(eta0, tau), analytic_threshold_plain(a, tau),
                0.05 * analytic_threshold_plain(a, tau))
        << tau;
  }
  EXPECT_THROW(scale_lr(0.0, 1), DomainError);
}

TEST(EffectiveLr, RoundTrip) {
  EXPECT_NEAR(effective_lr(0.1, 0.9), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(effective_lr(0.37, 0.0), 0.37);
  for (double m : {0.0, 0.25, 0.5, 0.9, 0.99}) {
    EXPECT_NEAR(dampened_lr(effective_lr(0.123, m), m), 0.123, 1e-16);
  }
  EXPECT_THROW(effective_lr(0.1, 1.0), DomainError);
  EXPECT_THROW(dampened_lr(0.1, -0.5), DomainError);
}

TEST(NumericThreshold, Examples) {
  const auto r = numeric_threshold(OptimizerFamily::plain(), 1.0, DelayModel::constant(8));
  EXPECT_NEAR(r.eta_star, 0.18453671892660399, 1e-6);
  EXPECT_EQ(r.method, ThresholdMethod::kNumericBisection);
  EXPECT_LE(r.eta_hi - r.eta_lo, 1e-8 * r.eta_star);
  EXPECT_LT(max_root_magnitude(char_poly_plain(r.eta_lo, 1.0, 8)), 1.0);
  EXPECT_GT(max_root_magnitude(char_poly_plain(r.eta_hi, 1.0, 8)), 1.0);
  EXPECT_LE(r.max_root_residual, kMaxScaledResidual);

  EXPECT_NEAR(NumericEta(OptimizerFamily::plain(), 8, 3.0), r.eta_star / 3.0, 1e-8 * r.eta_star);

  const double shifted = NumericEta(OptimizerFamily::shifted_momentum(0.9), 16);
  const double base = NumericEta(OptimizerFamily::plain(), 16);
  EXPECT_GT(shifted, base);
  // Dense grid cross-check of the bisection.
  const auto stable = [](double eta) {
    return is_stable(char_poly_shifted(eta, 1.0, 16, 0.9));
  };
  EXPECT_TRUE(stable(shifted * 0.999));
  EXPECT_FALSE(stable(shifted * 1.001));
  for (double eta = 0.002; eta < shifted * 0.999; eta += 0.002) EXPECT_TRUE(stable(eta)) << eta;
}

TEST(NumericThreshold, MatchesAnalyticEverywhere) {
  for (double a : {0.5, 1.0, 4.0}) {
    for (int tau = 0; tau <= 64; ++tau) {
      const double want = analytic_threshold_plain(a, tau);
      EXPECT_LE(std::abs(NumericEta(OptimizerFamily::plain(), tau, a) - want), 1e-6 * want)
          << "a=" << a << " tau=" << tau;
    }
  }
}

TEST(NumericThreshold, DependsOnlyOnGain) {
  for (const auto& f : {OptimizerFamily::plain(), OptimizerFamily::standard_momentum(0.6),
                        OptimizerFamily::shifted_momentum(0.6)}) {
    const double ref = NumericEta(f, 5, 1.0);
    for (double a : {0.25, 3.0, 17.0}) {
      EXPECT_NEAR(NumericEta(f, 5, a) * a, ref, 2e-8 * ref);
    }
  }
}

TEST(NumericThreshold, MomentumDirection) {
  for (int tau : {4, 16, 64}) {
    double prev_standard = INFINITY;
    double prev_shifted = 0.0;
    for (double m : {0.0, 0.3, 0.6, 0.9}) {
      const double standard = NumericEta(OptimizerFamily::standard_momentum(m), tau);
      const double shifted = NumericEta(OptimizerFamily::shifted_momentum(m), tau);
      EXPECT_LT(standard, prev_standard) << "tau=" << tau << " m=" << m;
      EXPECT_GT(shifted, prev_shifted) << "tau=" << tau << " m=" << m;
      prev_standard = standard;
      prev_shifted = shifted;
    }
  }
}

TEST(NumericThreshold, InverseGainIncreasesWithDelay) {
  for (const auto& f : {OptimizerFamily::plain(), OptimizerFamily::standard_momentum(0.5),
                        OptimizerFamily::standard_momentum(0.9),
                        OptimizerFamily::shifted_momentum(0.5),
                        OptimizerFamily::shifted_momentum(0.9)}) {
    double prev = 0.0;
    for (int tau = 1; tau <= 32; ++tau) {
      const double inv = 1.0 / NumericEta(f, tau);
      EXPECT_GT(inv, prev) << f.describe() << " tau=" << tau;
      prev = inv;
    }
  }
}

TEST(NumericThreshold, TauZeroMomentumClosedForm) {
  // Roots of z^2 + (g - 1 - m) z + m reach -1 at g = 2 (1 + m).
  for (double m : {0.0, 0.5, 0.9}) {
    EXPECT_NEAR(NumericEta(OptimizerFamily::standard_momentum(m), 0), 2.0 * (1 + m) / (1 - m),
                1e-7 * 2.0 * (1 + m) / (1 - m));
    EXPECT_NEAR(NumericEta(OptimizerFamily::standard_momentum(m), 1), 1.0, 1e-7);
  }
}

TEST(NumericThreshold, PointMassPmfMatchesConstant) {
  for (int tau : {1, 7, 30}) {
    const double c = NumericEta(OptimizerFamily::plain(), tau);
    const double p =
        numeric_threshold(OptimizerFamily::plain(), 1.0, DelayModel::pmf({{tau, 1.0}})).eta_star;
    EXPECT_NEAR(p, c, 1e-8 * c);
  }
}

TEST(NumericThreshold, Errors) {
  EXPECT_THROW(numeric_threshold(OptimizerFamily::standard_momentum(0.5), 1.0, pmf_uniform(1, 3)),
               DomainError);
  EXPECT_THROW(numeric_threshold(OptimizerFamily::plain(), 0.0, DelayModel::constant(1)),
               DomainError);
  EXPECT_THROW(numeric_threshold(OptimizerFamily{Variant::kPlain, 0.5}, 1.0,
                                 DelayModel::constant(1)),
               DomainError);
}

TEST(FitLine, ExactLine) {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{3, 5, 7, 9};
  const auto fit = fit_line(x, y);
  EXPECT_NEAR(fit.slope, 2.0, 1e-14);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-14);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-14);
  EXPECT_THROW(fit_line(std::vector<double>{1.0}, std::vector<double>{1.0}), DomainError);
}

TEST(ThresholdCurve, PlainSlope) {
  std::vector<int> taus;
  for (int t = 4; t <= 64; ++t) taus.push_back(t);
  const auto delays = constant_delays(taus);
  const auto curve = threshold_curve(OptimizerFamily::plain(), 1.0, delays);
  EXPECT_EQ(curve.failed_rows(), 0u);
  EXPECT_NEAR(curve.fit.slope, 2.0 / std::numbers::pi, 0.02 * 2.0 / std::numbers::pi);
  EXPECT_GE(curve.fit.r_squared, 0.999);
  const auto csv = curve.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCurveCsvHeader);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 62);
}

TEST(ThresholdCurve, UniformPmfIsLinearInMean) {
  std::vector<DelayModel> delays;
  for (int b = 1; b <= 64; ++b) delays.push_back(pmf_uniform(1, b));
  const auto curve = threshold_curve(OptimizerFamily::plain(), 1.0, delays);
  EXPECT_EQ(curve.failed_rows(), 0u);
  EXPECT_GE(curve.fit.r_squared, 0.99);
}

TEST(ThresholdCurve, GaussianPmfIsLinearInMean) {
  // Far tails of the large-mu pmfs put many roots near 1e-13 and below.
  std::vector<DelayModel> delays;
  for (int mu = 1; mu <= 30; ++mu) delays.push_back(pmf_discrete_gaussian(mu));
  const auto curve = threshold_curve(OptimizerFamily::plain(), 1.0, delays);
  EXPECT_EQ(curve.failed_rows(), 0u) << curve.to_csv();
  EXPECT_GE(curve.fit.r_squared, 0.99);
  for (const auto& row : curve.rows) EXPECT_LE(row.result->max_root_residual, kMaxScaledResidual);
}

TEST(ThresholdCurve, FailedRowsAreKept) {
  const std::vector<DelayModel> delays{DelayModel::constant(2), pmf_uniform(1, 3)};
  const auto curve = threshold_curve(OptimizerFamily::standard_momentum(0.5), 1.0, delays);
  EXPECT_EQ(curve.failed_rows(), 1u);
  EXPECT_FALSE(curve.rows[1].error.empty());
  const auto csv = curve.to_csv();
  EXPECT_NE(csv.find("\n2,,,failed,\n"), std::string::npos) << csv;
}

}  // namespace
}  // namespace staleness
