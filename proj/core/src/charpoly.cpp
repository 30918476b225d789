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

#include "staleness/charpoly.hpp"

#include <string>

#include "staleness/errors.hpp"

namespace staleness {
namespace {

void require_gain(double eta, double a) {
  if (!(eta > 0.0)) throw DomainError("learning rate must be positive");
  if (!(a > 0.0)) throw DomainError("sharpness must be positive");
}

void require_tau(int tau) {
  if (tau < 0) throw DomainError("delay must be non-negative");
}

void require_momentum(double m) {
  if (!(m >= 0.0 && m < 1.0)) throw DomainError("momentum must lie in [0, 1)");
}

}  // namespace

Polynomial char_poly_plain(double eta, double a, int tau) {
  require_gain(eta, a);
  require_tau(tau);
  return TermAccumulator{}.add(tau + 1, 1.0).add(tau, -1.0).add(0, eta * a).build();
}

Polynomial char_poly_momentum(double eta, double a, int tau, double m) {
  require_gain(eta, a);
  require_tau(tau);
  require_momentum(m);
  // For tau = 0 the m z^{tau-1} term is a negative power; multiply through by z.
  const int shift = tau == 0 ? 1 : 0;
  return TermAccumulator{}
      .add(tau + 1 + shift, 1.0)
      .add(tau + shift, -(1.0 + m))
      .add(tau - 1 + shift, m)
      .add(shift, eta * (1.0 - m) * a)
      .build();
}

Polynomial char_poly_shifted(double eta, double a, int tau, double m) {
  require_gain(eta, a);
  require_tau(tau);
  require_momentum(m);
  return TermAccumulator{}
      .add(tau + 2, 1.0)
      .add(tau + 1, -1.0)
      .add(1, eta * (1.0 - m) * a - m)
      .add(0, m)
      .build();
}

Polynomial char_poly_stochastic(double eta, double a, const DelayModel& delay) {
  require_gain(eta, a);
  if (delay.is_constant()) return char_poly_plain(eta, a, delay.tau());
  const int k_max = delay.max_delay();
  TermAccumulator terms;
  terms.add(k_max + 1, 1.0).add(k_max, -1.0);
  for (const auto& e : delay.entries()) terms.add(k_max - e.delay, eta * a * e.probability);
  return terms.build();
}

Polynomial char_poly(const OptimizerSpec& optimizer, double a, const DelayModel& delay) {
  const double eta = optimizer.eta();
  const double m = optimizer.momentum();
  if (!delay.is_constant()) {
    if (optimizer.variant() != Variant::kPlain) {
      throw DomainError("stochastic delay is only supported for the plain variant");
    }
    return char_poly_stochastic(eta, a, delay);
  }
  switch (optimizer.variant()) {
    case Variant::kPlain:
      return char_poly_plain(eta, a, delay.tau());
    case Variant::kMomentum:
      return char_poly_momentum(eta, a, delay.tau(), m);
    case Variant::kShiftedMomentum:
      return char_poly_shifted(eta, a, delay.tau(), m);
  }
  throw DomainError("unknown variant");
}

}  // namespace staleness
