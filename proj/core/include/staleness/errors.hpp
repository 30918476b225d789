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

#ifndef STALENESS_ERRORS_HPP
#define STALENESS_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace staleness {

/// Precondition violated by an argument (non-positive learning rate, m >= 1, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative solver ran out of iterations. Carries the best iterate so the
/// caller can still inspect how far it got.
class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(const std::string& what, int iterations,
                std::vector<std::complex<double>> best_roots = {},
                double best_estimate = 0.0)
      : std::runtime_error(what),
        iterations_(iterations),
        best_roots_(std::move(best_roots)),
        best_estimate_(best_estimate) {}

  int iterations() const noexcept { return iterations_; }
  const std::vector<std::complex<double>>& best_roots() const noexcept {
    return best_roots_;
  }
  double best_estimate() const noexcept { return best_estimate_; }

 private:
  int iterations_;
  std::vector<std::complex<double>> best_roots_;
  double best_estimate_;
};

/// The threshold bracket search never found an unstable learning rate below
/// the cap (or found no stable one at all).
class NoThreshold : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A simulation probe stayed Undecided even after its step budget was doubled.
class UndecidedAtProbe : public std::runtime_error {
 public:
  UndecidedAtProbe(const std::string& what, double eta)
      : std::runtime_error(what), eta_(eta) {}
  double eta() const noexcept { return eta_; }

 private:
  double eta_;
};

}  // namespace staleness

#endif  // STALENESS_ERRORS_HPP
