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

#ifndef STALENESS_OPTIMIZER_HPP
#define STALENESS_OPTIMIZER_HPP

#include <string>
#include <string_view>

namespace staleness {

enum class Variant {
  kPlain,
  kMomentum,         // velocity kept centrally, only the gradient is stale
  kShiftedMomentum,  // the whole velocity term is stale (per-worker buffers)
};

std::string_view to_string(Variant variant) noexcept;
/// Accepts "plain", "momentum", "shifted".
Variant parse_variant(std::string_view name);

/// Optimizer without a learning rate: what threshold searches vary eta over.
struct OptimizerFamily {
  Variant variant = Variant::kPlain;
  double momentum = 0.0;

  static OptimizerFamily plain() { return {Variant::kPlain, 0.0}; }
  static OptimizerFamily standard_momentum(double m) { return {Variant::kMomentum, m}; }
  static OptimizerFamily shifted_momentum(double m) {
    return {Variant::kShiftedMomentum, m};
  }

  /// Throws DomainError unless 0 <= m < 1 and Plain implies m == 0.
  void validate() const;
  std::string describe() const;

  friend bool operator==(const OptimizerFamily&, const OptimizerFamily&) = default;
};

class OptimizerSpec {
 public:
  /// eta >= 0. Zero is allowed so that pure persistence can be simulated; every
  /// stability analysis additionally requires eta > 0.
  OptimizerSpec(OptimizerFamily family, double eta);

  static OptimizerSpec plain(double eta) { return {OptimizerFamily::plain(), eta}; }
  static OptimizerSpec momentum(double eta, double m) {
    return {OptimizerFamily::standard_momentum(m), eta};
  }
  static OptimizerSpec shifted(double eta, double m) {
    return {OptimizerFamily::shifted_momentum(m), eta};
  }

  const OptimizerFamily& family() const noexcept { return family_; }
  Variant variant() const noexcept { return family_.variant; }
  double eta() const noexcept { return eta_; }
  double momentum() const noexcept { return family_.momentum; }

  OptimizerSpec with_eta(double eta) const { return {family_, eta}; }

  friend bool operator==(const OptimizerSpec&, const OptimizerSpec&) = default;

 private:
  OptimizerFamily family_;
  double eta_;
};

}  // namespace staleness

#endif  // STALENESS_OPTIMIZER_HPP
