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

#ifndef STALENESS_STABILITY_HPP
#define STALENESS_STABILITY_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "staleness/delay.hpp"
#include "staleness/optimizer.hpp"

namespace staleness {

enum class ThresholdMethod { kAnalytic, kNumericBisection, kEmpiricalBisection };

std::string_view to_string(ThresholdMethod method) noexcept;

/// Threshold learning rate eta*: where the largest characteristic root sits on
/// the unit circle (or, empirically, where simulations stop converging).
struct ThresholdResult {
  double eta_star = 0.0;
  ThresholdMethod method = ThresholdMethod::kAnalytic;
  /// Stable at eta_lo, unstable at eta_hi. Both equal eta_star for kAnalytic.
  double eta_lo = 0.0;
  double eta_hi = 0.0;
  double tolerance = 0.0;
  OptimizerFamily family;
  DelayModel delay = DelayModel::constant(0);
  double sharpness = 1.0;
  /// Largest scaled root residual seen at eta_lo/eta_hi; NaN when no roots were computed.
  double max_root_residual = 0.0;
  int probes = 0;

  /// 1 / (a * eta*), the quantity that grows linearly with the delay.
  double inverse_gain() const noexcept { return 1.0 / (sharpness * eta_star); }
};

/// (2/a) sin(pi / (4 tau + 2)).
double analytic_threshold_plain(double a, int tau);

/// (2 tau + 1) / pi, the first-order approximation of 1/(a eta*). tau >= 1.
double taylor_inverse_threshold(int tau);

/// pi eta0 / (4 (tau + 0.5)): the rate that keeps the minima that were stable
/// at eta0 without delay stable at delay tau.
double scale_lr(double eta0, int tau);

inline constexpr double kThresholdStartGain = 1e-6;
/// The bracket search gives up once eta(1-m)a exceeds this.
inline constexpr double kThresholdGainCap = 16.0;

/// Bisection on eta over "largest characteristic root inside the unit circle".
/// The bracket is found by doubling from eta = 1e-6/a; throws NoThreshold when
/// the dampened gain eta(1-m)a passes kThresholdGainCap while still stable.
ThresholdResult numeric_threshold(const OptimizerFamily& family, double a,
                                  const DelayModel& delay, double rel_tol = 1e-8);

/// eta / (1 - m): the rate an undampened momentum optimizer effectively uses.
double effective_lr(double eta, double m);
/// Inverse of effective_lr.
double dampened_lr(double eta_eff, double m);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = slope * x + intercept. Needs at least two distinct x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct CurveRow {
  /// tau for a constant delay, E[tau] for a pmf.
  double expected_delay = 0.0;
  std::optional<ThresholdResult> result;
  std::string error;
};

struct ThresholdCurve {
  std::vector<CurveRow> rows;
  /// Fit of 1/(a eta*) against expected delay over the successful rows.
  LinearFit fit;

  std::size_t failed_rows() const noexcept;
  /// Header tau_or_Etau,eta_star,inv_a_eta,method,max_root_residual. Failed
  /// rows keep their delay and leave numeric fields empty with method "failed".
  std::string to_csv() const;
};

inline constexpr const char* kCurveCsvHeader =
    "tau_or_Etau,eta_star,inv_a_eta,method,max_root_residual";

/// One numeric threshold per delay model. Row failures are recorded, not thrown.
ThresholdCurve threshold_curve(const OptimizerFamily& family, double a,
                               std::span<const DelayModel> delays,
                               double rel_tol = 1e-8);

std::vector<DelayModel> constant_delays(std::span<const int> taus);

}  // namespace staleness

#endif  // STALENESS_STABILITY_HPP
