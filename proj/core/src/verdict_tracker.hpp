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

#ifndef STALENESS_SRC_VERDICT_TRACKER_HPP
#define STALENESS_SRC_VERDICT_TRACKER_HPP

#include <cmath>
#include <optional>

#include "staleness/dynamics.hpp"

namespace staleness::detail {

/// Turns a stream of distances to x* into a verdict: Diverged as soon as the
/// distance leaves blowup * initial (or stops being finite), Converged after
/// `window` consecutive steps below decay * initial.
class VerdictTracker {
 public:
  VerdictTracker(double initial_norm, double blowup, double decay, int window)
      : upper_(blowup * initial_norm), lower_(decay * initial_norm), window_(window) {}

  std::optional<SimStatus> observe(double norm) {
    if (!std::isfinite(norm) || norm > upper_) return SimStatus::kDiverged;
    if (norm < lower_) {
      if (++below_ >= window_) return SimStatus::kConverged;
    } else {
      below_ = 0;
    }
    return std::nullopt;
  }

 private:
  double upper_;
  double lower_;
  int window_;
  int below_ = 0;
};

}  // namespace staleness::detail

#endif  // STALENESS_SRC_VERDICT_TRACKER_HPP
