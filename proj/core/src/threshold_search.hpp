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

#ifndef STALENESS_SRC_THRESHOLD_SEARCH_HPP
#define STALENESS_SRC_THRESHOLD_SEARCH_HPP

#include <functional>

namespace staleness::detail {

// Empirical searches start here (in units of 1/a): eta a = 1 is exactly the
// tau = 1 threshold, where a probe can never decide.
inline constexpr double kEmpiricalStartGain = 0.75;

struct Bracket {
  double lo = 0.0;  // last learning rate that passed the probe
  double hi = 0.0;  // first learning rate that failed it
  int probes = 0;
};

/// Doubles eta from `start` until `stable(eta)` fails, then bisects until
/// hi - lo <= rel_tol * (lo + hi) / 2. Assumes the predicate flips once along
/// eta; every bisection step keeps lo passing and hi failing.
///
/// If `start` already fails and `floor` > 0, eta is halved until it passes
/// instead. Throws NoThreshold when eta passes `cap` still stable, or drops
/// below `floor` (or `floor` is 0) still unstable.
Bracket find_threshold(const std::function<bool(double)>& stable, double start, double cap,
                       double rel_tol, double floor = 0.0);

}  // namespace staleness::detail

#endif  // STALENESS_SRC_THRESHOLD_SEARCH_HPP
