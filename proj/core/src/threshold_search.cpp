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

#include "threshold_search.hpp"

#include <string>

#include "staleness/errors.hpp"
#include "staleness/format.hpp"

namespace staleness::detail {
namespace {

Bracket bisect(const std::function<bool(double)>& stable, Bracket b, double rel_tol) {
  while (b.hi - b.lo > rel_tol * 0.5 * (b.lo + b.hi)) {
    const double mid = 0.5 * (b.lo + b.hi);
    if (mid <= b.lo || mid >= b.hi) break;  // bracket is down to adjacent doubles
    ++b.probes;
    if (stable(mid)) {
      b.lo = mid;
    } else {
      b.hi = mid;
    }
  }
  return b;
}

}  // namespace

Bracket find_threshold(const std::function<bool(double)>& stable, double start, double cap,
                       double rel_tol, double floor) {
  if (!(rel_tol > 0.0)) throw DomainError("threshold search: rel_tol must be positive");
  Bracket b;
  ++b.probes;
  if (!stable(start)) {
    double eta = start;
    while (true) {
      b.hi = eta;
      eta *= 0.5;
      if (floor <= 0.0 || eta < floor) {
        throw NoThreshold("unstable already at eta = " + format_double(b.hi));
      }
      ++b.probes;
      if (stable(eta)) break;
    }
    b.lo = eta;
    return bisect(stable, b, rel_tol);
  }
  b.lo = start;
  double eta = start;
  while (true) {
    eta *= 2.0;
    if (eta > cap) {
      throw NoThreshold("still stable at eta = " + format_double(b.lo) +
                        "; bracket cap eta = " + format_double(cap) + " reached");
    }
    ++b.probes;
    if (!stable(eta)) break;
    b.lo = eta;
  }
  b.hi = eta;
  return bisect(stable, b, rel_tol);
}

}  // namespace staleness::detail
