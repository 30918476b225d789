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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "staleness/charpoly.hpp"
#include "staleness/errors.hpp"
#include "staleness/format.hpp"
#include "staleness/roots.hpp"
#include "threshold_search.hpp"

namespace staleness {

std::string_view to_string(ThresholdMethod method) noexcept {
  switch (method) {
    case ThresholdMethod::kAnalytic:
      return "analytic";
    case ThresholdMethod::kNumericBisection:
      return "numeric_bisection";
    case ThresholdMethod::kEmpiricalBisection:
      return "empirical_bisection";
  }
  return "unknown";
}

double analytic_threshold_plain(double a, int tau) {
  if (!(a > 0.0)) throw DomainError("sharpness must be positive");
  if (tau < 0) throw DomainError("delay must be non-negative");
  return 2.0 / a * std::sin(std::numbers::pi / (4.0 * tau + 2.0));
}

double taylor_inverse_threshold(int tau) {
  if (tau < 1) throw DomainError("the linear approximation is only claimed for tau >= 1");
  return (2.0 * tau + 1.0) / std::numbers::pi;
}

double scale_lr(double eta0, int tau) {
  if (!(eta0 > 0.0)) throw DomainError("eta0 must be positive");
  if (tau < 0) throw DomainError("delay must be non-negative");
  return std::numbers::pi * eta0 / (4.0 * (tau + 0.5));
}

ThresholdResult numeric_threshold(const OptimizerFamily& family, double a,
                                  const DelayModel& delay, double rel_tol) {
  family.validate();
  if (!(a > 0.0)) throw DomainError("sharpness must be positive");
  if (!delay.is_constant() && family.variant != Variant::kPlain) {
    throw DomainError("stochastic delay is only supported for the plain variant");
  }

  double residual = 0.0;
  auto stable = [&](double eta) {
    const auto roots = all_roots(char_poly(OptimizerSpec(family, eta), a, delay));
    residual = std::max(residual, roots.max_residual());
    return roots.max_magnitude() < 1.0;
  };
  const double start = kThresholdStartGain / a;
  const double cap = kThresholdGainCap / ((1.0 - family.momentum) * a);
  const auto bracket = detail::find_threshold(stable, start, cap, rel_tol);

  ThresholdResult r;
  r.eta_star = 0.5 * (bracket.lo + bracket.hi);
  r.method = ThresholdMethod::kNumericBisection;
  r.eta_lo = bracket.lo;
  r.eta_hi = bracket.hi;
  r.tolerance = rel_tol;
  r.family = family;
  r.delay = delay;
  r.sharpness = a;
  r.max_root_residual = residual;
  r.probes = bracket.probes;
  return r;
}

double effective_lr(double eta, double m) {
  if (!(m >= 0.0 && m < 1.0)) throw DomainError("momentum must lie in [0, 1)");
  return eta / (1.0 - m);
}

double dampened_lr(double eta_eff, double m) {
  if (!(m >= 0.0 && m < 1.0)) throw DomainError("momentum must lie in [0, 1)");
  return eta_eff * (1.0 - m);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("fit_line: size mismatch");
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) throw DomainError("fit_line: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit_line: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  fit.points = x.size();
  return fit;
}

std::size_t ThresholdCurve::failed_rows() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const CurveRow& r) { return !r.result; }));
}

std::string ThresholdCurve::to_csv() const {
  std::ostringstream out;
  out << kCurveCsvHeader << '\n';
  for (const auto& row : rows) {
    out << format_double(row.expected_delay) << ',';
    if (row.result) {
      out << format_double(row.result->eta_star) << ','
          << format_double(row.result->inverse_gain()) << ',' << to_string(row.result->method)
          << ',' << format_double(row.result->max_root_residual);
    } else {
      out << ",,failed,";
    }
    out << '\n';
  }
  return out.str();
}

ThresholdCurve threshold_curve(const OptimizerFamily& family, double a,
                               std::span<const DelayModel> delays, double rel_tol) {
  if (delays.empty()) throw DomainError("threshold_curve: no delays given");
  ThresholdCurve curve;
  std::vector<double> xs, ys;
  for (const auto& delay : delays) {
    CurveRow row;
    row.expected_delay = delay.expected_delay();
    try {
      row.result = numeric_threshold(family, a, delay, rel_tol);
      xs.push_back(row.expected_delay);
      ys.push_back(row.result->inverse_gain());
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    curve.rows.push_back(std::move(row));
  }
  if (xs.size() >= 2 && std::adjacent_find(xs.begin(), xs.end(), std::not_equal_to<>()) != xs.end()) {
    curve.fit = fit_line(xs, ys);
  }
  return curve;
}

std::vector<DelayModel> constant_delays(std::span<const int> taus) {
  std::vector<DelayModel> out;
  out.reserve(taus.size());
  for (int tau : taus) out.push_back(DelayModel::constant(tau));
  return out;
}

}  // namespace staleness
