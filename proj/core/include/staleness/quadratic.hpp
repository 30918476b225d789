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

#ifndef STALENESS_QUADRATIC_HPP
#define STALENESS_QUADRATIC_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace staleness {

/// Quadratic loss around a minimum x*: mean Hessian H and, optionally, the
/// per-sample Hessians H_i whose mean is H. The sharpness is lambda_max(H).
class QuadraticProblem {
 public:
  static QuadraticProblem scalar(double a);
  static QuadraticProblem diagonal(const std::vector<double>& spectrum);
  static QuadraticProblem from_hessian(Eigen::MatrixXd hessian,
                                       Eigen::VectorXd minimum = {});
  /// H is the mean of the components.
  static QuadraticProblem from_components(std::vector<Eigen::MatrixXd> components,
                                          Eigen::VectorXd minimum = {});

  int dimension() const noexcept { return static_cast<int>(hessian_.rows()); }
  const Eigen::MatrixXd& hessian() const noexcept { return hessian_; }
  const Eigen::VectorXd& minimum() const noexcept { return minimum_; }

  bool has_components() const noexcept { return !components_.empty(); }
  std::size_t component_count() const noexcept { return components_.size(); }
  const Eigen::MatrixXd& component(std::size_t i) const { return components_.at(i); }

  double sharpness() const noexcept { return eigenvalues_(eigenvalues_.size() - 1); }
  /// Ascending.
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const noexcept { return eigenvectors_; }
  /// Unit eigenvector of the sharpness, sign fixed so its largest entry is positive.
  Eigen::VectorXd top_eigenvector() const;

  /// H (x - x*).
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  /// H_i (x - x*).
  Eigen::VectorXd component_gradient(std::size_t i, const Eigen::VectorXd& x) const;

 private:
  QuadraticProblem(Eigen::MatrixXd hessian, Eigen::VectorXd minimum,
                   std::vector<Eigen::MatrixXd> components);

  Eigen::MatrixXd hessian_;
  Eigen::VectorXd minimum_;
  std::vector<Eigen::MatrixXd> components_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

/// Q diag(lambda) Q^T with Q Haar-random orthogonal and lambda uniform in [lo, hi].
Eigen::MatrixXd random_spd_matrix(int dimension, std::uint64_t seed, double lo = 0.1,
                                  double hi = 10.0);

}  // namespace staleness

#endif  // STALENESS_QUADRATIC_HPP
