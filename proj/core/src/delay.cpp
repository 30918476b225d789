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

#include "staleness/delay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "staleness/errors.hpp"
#include "staleness/format.hpp"

namespace staleness {

DelayModel DelayModel::constant(int tau) {
  if (tau < 0) throw DomainError("DelayModel: negative delay");
  return DelayModel(Constant{tau});
}

DelayModel DelayModel::pmf(std::vector<PmfEntry> entries) {
  if (entries.empty()) throw DomainError("DelayModel: empty pmf");
  std::sort(entries.begin(), entries.end(),
            [](const PmfEntry& l, const PmfEntry& r) { return l.delay < r.delay; });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.delay < 1) throw DomainError("DelayModel: pmf delays must be positive");
    if (!(e.probability > 0.0 && e.probability <= 1.0)) {
      throw DomainError("DelayModel: pmf masses must lie in (0, 1]");
    }
    if (i > 0 && entries[i - 1].delay == e.delay) {
      throw DomainError("DelayModel: duplicate delay in pmf");
    }
  }
  const double total = std::accumulate(entries.begin(), entries.end(), 0.0,
                                       [](double s, const PmfEntry& e) { return s + e.probability; });
  for (auto& e : entries) e.probability /= total;
  return DelayModel(Pmf{std::move(entries)});
}

int DelayModel::tau() const {
  if (const auto* c = std::get_if<Constant>(&model_)) return c->tau;
  throw DomainError("DelayModel: tau() on a pmf delay");
}

std::span<const PmfEntry> DelayModel::entries() const noexcept {
  if (const auto* p = std::get_if<Pmf>(&model_)) return p->entries;
  return {};
}

double DelayModel::expected_delay() const noexcept {
  if (const auto* c = std::get_if<Constant>(&model_)) return c->tau;
  double mean = 0.0;
  for (const auto& e : entries()) mean += e.delay * e.probability;
  return mean;
}

int DelayModel::max_delay() const noexcept {
  if (const auto* c = std::get_if<Constant>(&model_)) return c->tau;
  return entries().back().delay;
}

std::string DelayModel::describe() const {
  if (is_constant()) return "tau=" + std::to_string(tau());
  std::string out = "pmf{";
  bool first = true;
  for (const auto& e : entries()) {
    if (!first) out += ',';
    first = false;
    out += std::to_string(e.delay) + ':' + format_double(e.probability);
  }
  return out + '}';
}

DelayModel pmf_uniform(int lo, int hi) {
  if (lo < 1 || lo > hi) throw DomainError("pmf_uniform: need 1 <= lo <= hi");
  const double mass = 1.0 / (hi - lo + 1);
  std::vector<PmfEntry> entries;
  for (int k = lo; k <= hi; ++k) entries.push_back({k, mass});
  return DelayModel::pmf(std::move(entries));
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// P(lo <= Z <= hi) for standard normal Z, evaluated in whichever tail keeps
// both terms small so the difference does not cancel.
double normal_interval(double lo, double hi) {
  if (lo >= 0.0) return normal_cdf(-lo) - normal_cdf(-hi);
  return normal_cdf(hi) - normal_cdf(lo);
}

}  // namespace

DelayModel pmf_discrete_gaussian(int mu) {
  if (mu < 1) throw DomainError("pmf_discrete_gaussian: mu must be >= 1");
  std::vector<PmfEntry> entries;
  for (int k = 1; k <= 2 * mu; ++k) {
    const double p = normal_interval(k - 0.5 - mu, k + 0.5 - mu);
    // Far tails underflow to zero for very large mu; they carry no mass.
    if (p > 0.0) entries.push_back({k, p});
  }
  return DelayModel::pmf(std::move(entries));
}

}  // namespace staleness
