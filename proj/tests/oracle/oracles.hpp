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

#ifndef STALENESS_TESTS_ORACLES_HPP
#define STALENESS_TESTS_ORACLES_HPP

// Independent reference computations for the tests. Nothing here may call
// into the code paths it is used to check.

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace staleness::oracle {

/// Eigenvalues of the companion matrix (Eigen's general eigensolver).
std::vector<std::complex<double>> companion_roots(std::span<const double> ascending);
double companion_max_magnitude(std::span<const double> ascending);

// The characteristic expressions exactly as written, negative powers and all,
// multiplied by z^shift. Evaluated with std::pow, no coefficient arrays.
std::complex<double> plain_expr(double eta, double a, int tau, std::complex<double> z);
std::complex<double> momentum_expr(double eta, double a, int tau, double m,
                                   std::complex<double> z);
std::complex<double> shifted_expr(double eta, double a, int tau, double m,
                                  std::complex<double> z);
/// `pmf` holds (delay, probability) pairs.
std::complex<double> stochastic_expr(double eta, double a,
                                     std::span<const std::pair<int, double>> pmf,
                                     std::complex<double> z);

/// Standard normal probability of [lo, hi] by composite Simpson quadrature.
double normal_mass_simpson(double lo, double hi, int panels = 2000);

/// Ascending eigenvalues of a symmetric matrix.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m);

/// Iterates the scalar recurrence with raw doubles for `steps` steps and
/// returns |x_T| (x_t = 1 for t <= 0). Plain, momentum (x-difference form) or
/// shifted momentum (x-difference form).
double scalar_recurrence_final(int variant, double eta, double a, int tau, double m, long steps);

}  // namespace staleness::oracle

#endif  // STALENESS_TESTS_ORACLES_HPP
