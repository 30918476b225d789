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

#include "staleness/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "staleness/errors.hpp"

namespace staleness {
namespace {

using cplx = std::complex<double>;

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct NewtonTerms {
  cplx ratio;             // p(z) / p'(z)
  double scaled_residual; // |p(z)| / sum |c_k| |z|^k
};

// Evaluates p/p' and the scaled residual. For |z| > 1 the reversed polynomial
// q(w) = w^n p(1/w) is used so that high powers of z never overflow:
// p/p' = z q(w) / (n q(w) - w q'(w)).
NewtonTerms newton_terms(std::span<const double> c, cplx z) {
  const int n = static_cast<int>(c.size()) - 1;
  cplx value = 0.0;
  cplx deriv = 0.0;
  double abs_sum = 0.0;
  if (std::abs(z) <= 1.0) {
    const double r = std::abs(z);
    for (int k = n; k >= 0; --k) {
      deriv = deriv * z + value;
      value = value * z + c[static_cast<std::size_t>(k)];
      abs_sum = abs_sum * r + std::abs(c[static_cast<std::size_t>(k)]);
    }
    return {value / deriv, std::abs(value) / abs_sum};
  }
  const cplx w = 1.0 / z;
  const double r = std::abs(w);
  for (int j = n; j >= 0; --j) {
    const double cj = c[static_cast<std::size_t>(n - j)];
    deriv = deriv * w + value;
    value = value * w + cj;
    abs_sum = abs_sum * r + std::abs(cj);
  }
  return {z * value / (static_cast<double>(n) * value - w * deriv), std::abs(value) / abs_sum};
}

double scaled_residual(std::span<const double> c, cplx z) {
  return newton_terms(c, z).scaled_residual;
}

}  // namespace

double RootSet::max_magnitude() const noexcept {
  double m = 0.0;
  for (const auto& z : roots) m = std::max(m, std::abs(z));
  return m;
}

double RootSet::max_residual() const noexcept {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

RootSet all_roots(const Polynomial& p, double tol, int max_iter) {
  if (p.degree() < 1) throw DomainError("all_roots: polynomial degree must be >= 1");
  if (!(tol > 0.0) || max_iter < 1) throw DomainError("all_roots: bad tolerance or iteration cap");

  RootSet out;
  auto all = p.coeffs();
  std::size_t zeros = 0;
  while (all[zeros] == 0.0) ++zeros;
  for (std::size_t i = 0; i < zeros; ++i) {
    out.roots.emplace_back(0.0, 0.0);
    out.residuals.push_back(0.0);
  }
  const auto c = all.subspan(zeros);
  const int n = static_cast<int>(c.size()) - 1;
  if (n == 0) return out;
  if (n == 1) {
    const cplx z(-c[0] / c[1], 0.0);
    out.roots.push_back(z);
    out.residuals.push_back(scaled_residual(c, z));
    return out;
  }

  double bound = 0.0;
  for (int k = 0; k < n; ++k) bound = std::max(bound, std::abs(c[static_cast<std::size_t>(k)] / c.back()));
  const double radius = 1.0 + bound;

  // Golden-angle spacing with a fixed phase: deterministic, and never
  // symmetric about the real axis.
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  constexpr double kPhase = 0.4;
  std::vector<cplx> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) z[static_cast<std::size_t>(k)] = std::polar(radius, kPhase + k * golden);

  const double residual_floor = 4.0 * n * kEps;
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  int iter = 0;
  bool converged = false;
  while (iter < max_iter && !converged) {
    ++iter;
    converged = true;
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (done[k]) continue;
      const auto terms = newton_terms(c, z[k]);
      if (terms.scaled_residual <= residual_floor) {
        done[k] = true;
        continue;
      }
      cplx repulsion = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      }
      cplx step = terms.ratio / (1.0 - terms.ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
        // p'(z) vanished or two iterates collided; nudge and try again.
        step = cplx(1e-8, 1e-8) * std::max(1.0, std::abs(z[k]));
      }
      z[k] -= step;
      // Relative test: pmfs with far Gaussian tails put roots at 1e-13 and
      // below, which an absolute step test would freeze long before they settle.
      if (std::abs(step) <= tol * std::max(std::abs(z[k]), std::numeric_limits<double>::min())) {
        done[k] = true;
      } else {
        converged = false;
      }
    }
  }
  if (!converged) {
    std::vector<cplx> best(out.roots);
    best.insert(best.end(), z.begin(), z.end());
    throw NoConvergence("all_roots: no convergence after " + std::to_string(iter) + " sweeps",
                        iter, std::move(best));
  }

  out.iterations = iter;
  for (const auto& root : z) {
    out.roots.push_back(root);
    out.residuals.push_back(scaled_residual(c, root));
  }
  if (out.max_residual() > kMaxScaledResidual) {
    throw NoConvergence("all_roots: residual check failed after convergence", iter, out.roots);
  }
  return out;
}

double max_root_magnitude(const Polynomial& p) { return all_roots(p).max_magnitude(); }

bool is_stable(const Polynomial& p, double margin) {
  if (!(margin >= 0.0)) throw DomainError("is_stable: margin must be non-negative");
  return max_root_magnitude(p) < 1.0 - margin;
}

}  // namespace staleness
