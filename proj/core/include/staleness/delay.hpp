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

#ifndef STALENESS_DELAY_HPP
#define STALENESS_DELAY_HPP

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace staleness {

struct PmfEntry {
  int delay;
  double probability;

  friend bool operator==(const PmfEntry&, const PmfEntry&) = default;
};

/// Gradient staleness model: either a constant delay tau >= 0, or a finite
/// probability mass function over positive delays.
///
/// Pmf entries are sorted by delay, delays are distinct, and the masses are
/// renormalized to sum to one on construction.
class DelayModel {
 public:
  struct Constant {
    int tau;
  };
  struct Pmf {
    std::vector<PmfEntry> entries;
  };

  static DelayModel constant(int tau);
  static DelayModel pmf(std::vector<PmfEntry> entries);

  bool is_constant() const noexcept { return std::holds_alternative<Constant>(model_); }
  /// Constant delay; throws DomainError for a pmf.
  int tau() const;
  /// Pmf entries; a constant delay has none.
  std::span<const PmfEntry> entries() const noexcept;

  double expected_delay() const noexcept;
  int max_delay() const noexcept;

  /// Short human-readable label: "tau=8" or "pmf{1:0.5,2:0.5}".
  std::string describe() const;

 private:
  explicit DelayModel(std::variant<Constant, Pmf> model) : model_(std::move(model)) {}

  std::variant<Constant, Pmf> model_;
};

/// Uniform masses 1/(hi-lo+1) on {lo, ..., hi}.
DelayModel pmf_uniform(int lo, int hi);

/// Masses Phi(k+0.5-mu) - Phi(k-0.5-mu) for k = 1..2mu (unit variance),
/// renormalized after truncation.
DelayModel pmf_discrete_gaussian(int mu);

/// Standard normal CDF.
double normal_cdf(double x) noexcept;

}  // namespace staleness

#endif  // STALENESS_DELAY_HPP
