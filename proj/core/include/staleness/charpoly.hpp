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

#ifndef STALENESS_CHARPOLY_HPP
#define STALENESS_CHARPOLY_HPP

#include "staleness/delay.hpp"
#include "staleness/optimizer.hpp"
#include "staleness/polynomial.hpp"

namespace staleness {

// Characteristic polynomials of the linearized delayed dynamics along one
// Hessian eigendirection with curvature a. Negative powers of z are cleared by
// multiplying through with the smallest sufficient power of z, which only adds
// roots at zero.

/// z^{tau+1} - z^tau + eta*a.
Polynomial char_poly_plain(double eta, double a, int tau);

/// z^{tau+1} - (1+m) z^tau + m z^{tau-1} + eta(1-m)a; for tau = 0 the z-multiplied
/// form z^2 + (eta(1-m)a - 1 - m) z + m.
Polynomial char_poly_momentum(double eta, double a, int tau, double m);

/// z^{tau+2} - z^{tau+1} + (eta(1-m)a - m) z + m.
Polynomial char_poly_shifted(double eta, double a, int tau, double m);

/// z^{K+1} - z^K + eta*a * sum_k p_k z^{K-k}, K the largest delay in the pmf.
/// A constant delay model is accepted and treated as a point mass.
Polynomial char_poly_stochastic(double eta, double a, const DelayModel& delay);

/// Dispatches on variant and delay model. Stochastic delay is only defined for
/// the plain variant.
Polynomial char_poly(const OptimizerSpec& optimizer, double a, const DelayModel& delay);

}  // namespace staleness

#endif  // STALENESS_CHARPOLY_HPP
