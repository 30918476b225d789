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

#include "staleness/quadratic.hpp"

#include <random>
#include <string>

#include "staleness/errors.hpp"
#include "staleness/format.hpp"

namespace staleness {

QuadraticProblem::QuadraticProblem(Eigen::MatrixXd hessian, Eigen::VectorXd minimum,
                                   std::vector<Eigen::MatrixXd> components)
    : hessian_(std::move(hessian)),
      minimum_(std::move(minimum)),
      components_(std::move(components)) {
  const auto d = hessian_.rows();
  if (d == 0 || hessian_.cols() != d) throw DomainError("QuadraticProblem: Hessian must be square and non-empty");
  if (!hessian_.allFinite()) throw DomainError("QuadraticProblem: non-finite Hessian");
  if ((hessian_ - hessian_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw DomainError("QuadraticProblem: Hessian is not symmetric");
  }
  if (minimum_.size() == 0) minimum_ = Eigen::VectorXd::Zero(d);
  if (minimum_.size() != d) throw DomainError("QuadraticProblem: minimum has wrong dimension");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hessian_);
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
  if (eigenvalues_(0) < -1e-10) throw DomainError("QuadraticProblem: Hessian is not PSD");
  if (!(sharpness() > 0.0)) throw DomainError("QuadraticProblem: sharpness must be positive");

  if (!components_.empty()) {
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(d, d);
    for (const auto& c : components_) {
      if (c.rows() != d || c.cols() != d) throw DomainError("QuadraticProblem: component has wrong shape");
      if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw DomainError("QuadraticProblem: component is not symmetric");
      }
      mean += c;
    }
    mean /= static_cast<double>(components_.size());
    if ((mean - hessian_).cwiseAbs().maxCoeff() > 1e-10) {
      throw DomainError("QuadraticProblem: components do not average to the Hessian");
    }
  }
}

QuadraticProblem QuadraticProblem::scalar(double a) { return diagonal({a}); }

QuadraticProblem QuadraticProblem::diagonal(const std::vector<double>& spectrum) {
  Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(spectrum.data(),
                                                           static_cast<Eigen::Index>(spectrum.size()));
  return from_hessian(diag.asDiagonal());
}

QuadraticProblem QuadraticProblem::from_hessian(Eigen::MatrixXd hessian, Eigen::VectorXd minimum) {
  return QuadraticProblem(std::move(hessian), std::move(minimum), {});
}

QuadraticProblem QuadraticProblem::from_components(std::vector<Eigen::MatrixXd> components,
                                                   Eigen::VectorXd minimum) {
  if (components.empty()) throw DomainError("QuadraticProblem: no components");
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(components[0].rows(), components[0].cols());
  for (const auto& c : components) {
    if (c.rows() != mean.rows() || c.cols() != mean.cols()) {
      throw DomainError("QuadraticProblem: component has wrong shape");
    }
    mean += c;
  }
  mean /= static_cast<double>(components.size());
  return QuadraticProblem(std::move(mean), std::move(minimum), std::move(components));
}

Eigen::VectorXd QuadraticProblem::top_eigenvector() const {
  Eigen::VectorXd v = eigenvectors_.col(eigenvectors_.cols() - 1);
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  if (v(idx) < 0.0) v = -v;
  return v;
}

Eigen::VectorXd QuadraticProblem::gradient(const Eigen::VectorXd& x) const {
  return hessian_ * (x - minimum_);
}

Eigen::VectorXd QuadraticProblem::component_gradient(std::size_t i, const Eigen::VectorXd& x) const {
  return components_.at(i) * (x - minimum_);
}

Eigen::MatrixXd random_spd_matrix(int dimension, std::uint64_t seed, double lo, double hi) {
  if (dimension < 1) throw DomainError("random_spd_matrix: dimension must be >= 1");
  if (!(0.0 < lo && lo <= hi)) throw DomainError("random_spd_matrix: need 0 < lo <= hi");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(lo, hi);
  Eigen::MatrixXd g(dimension, dimension);
  for (int j = 0; j < dimension; ++j) {
    for (int i = 0; i < dimension; ++i) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd lambda(dimension);
  for (int i = 0; i < dimension; ++i) lambda(i) = uniform(rng);
  Eigen::MatrixXd h = q * lambda.asDiagonal() * q.transpose();
  return 0.5 * (h + h.transpose());
}

}  // namespace staleness
