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

#include "staleness/optimizer.hpp"

#include <cmath>
#include <string>

#include "staleness/errors.hpp"
#include "staleness/format.hpp"

namespace staleness {

std::string_view to_string(Variant variant) noexcept {
  switch (variant) {
    case Variant::kPlain:
      return "plain";
    case Variant::kMomentum:
      return "momentum";
    case Variant::kShiftedMomentum:
      return "shifted";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  if (name == "plain") return Variant::kPlain;
  if (name == "momentum") return Variant::kMomentum;
  if (name == "shifted") return Variant::kShiftedMomentum;
  throw DomainError("unknown variant '" + std::string(name) +
                    "' (expected plain, momentum or shifted)");
}

void OptimizerFamily::validate() const {
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw DomainError("momentum must lie in [0, 1), got " + format_double(momentum));
  }
  if (variant == Variant::kPlain && momentum != 0.0) {
    throw DomainError("plain variant requires m = 0");
  }
}

std::string OptimizerFamily::describe() const {
  std::string out(to_string(variant));
  if (variant != Variant::kPlain) out += "(m=" + format_double(momentum) + ")";
  return out;
}

OptimizerSpec::OptimizerSpec(OptimizerFamily family, double eta) : family_(family), eta_(eta) {
  family_.validate();
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw DomainError("learning rate must be finite and non-negative");
  }
}

}  // namespace staleness
