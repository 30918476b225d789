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

#ifndef STALENESS_SRC_UPDATE_RULES_HPP
#define STALENESS_SRC_UPDATE_RULES_HPP

#include <Eigen/Dense>

// Parameter updates shared by the delayed-recurrence simulator and the
// parameter-server emulator, so both evaluate the same floating-point
// expressions in the same order.

namespace staleness::detail {

/// x <- x - eta g
inline void apply_plain(Eigen::VectorXd& x, const Eigen::VectorXd& g, double eta) {
  x.noalias() -= eta * g;
}

/// v_next = m v_prev - eta (1 - m) g;  x <- x + v_next
/// Standard momentum passes v_prev = v_t, shifted momentum v_prev = v_{t-tau}.
inline void apply_velocity(Eigen::VectorXd& x, Eigen::VectorXd& v_next,
                           const Eigen::VectorXd& v_prev, const Eigen::VectorXd& g, double eta,
                           double m) {
  v_next = m * v_prev - (eta * (1.0 - m)) * g;
  x += v_next;
}

}  // namespace staleness::detail

#endif  // STALENESS_SRC_UPDATE_RULES_HPP
