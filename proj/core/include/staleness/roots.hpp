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

#ifndef STALENESS_ROOTS_HPP
#define STALENESS_ROOTS_HPP

#include <complex>
#include <vector>

#include "staleness/polynomial.hpp"

namespace staleness {

struct RootSet {
  std::vector<std::complex<double>> roots;
  /// |P(z_i)| / sum_k |c_k| |z_i|^k for each root.
  std::vector<double> residuals;
  int iterations = 0;

  double max_magnitude() const noexcept;
  double max_residual() const noexcept;
};

inline constexpr double kMaxScaledResidual = 1e-9;

/// All complex roots by Aberth-Ehrlich simultaneous iteration.
///
/// Exact zero roots (vanishing low-order coefficients) are split off first.
/// The remaining roots start on the Cauchy-bound circle at golden-angle
/// spacing, so results are reproducible bit for bit. A root counts as converged
/// once its update drops below tol * |z| or its scaled residual reaches
/// rounding level. Throws NoConvergence (with the last iterate) after max_iter
/// sweeps or if any final residual exceeds kMaxScaledResidual.
RootSet all_roots(const Polynomial& p, double tol = 1e-13, int max_iter = 500);

double max_root_magnitude(const Polynomial& p);

/// True iff every root lies strictly inside the circle of radius 1 - margin.
/// Roots on the unit circle count as unstable.
bool is_stable(const Polynomial& p, double margin = 0.0);

}  // namespace staleness

#endif  // STALENESS_ROOTS_HPP
