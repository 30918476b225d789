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

#ifndef STALENESS_VERIFY_HPP
#define STALENESS_VERIFY_HPP

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace staleness::verify {

struct CriterionInfo {
  int id;
  std::string_view name;
  std::string_view summary;
  /// Wall-clock budget in seconds; 0 means unbounded.
  double budget_seconds;
};

/// The acceptance criteria in order.
const std::vector<CriterionInfo>& criteria();

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// One-line measurement summary; contains no timings.
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  /// Criterion names to run; empty runs all of them.
  std::vector<std::string> only;
  /// Artifact directory; a temporary directory is used when unset.
  std::optional<std::filesystem::path> out_dir;
  /// The closed-form threshold under test. Replaceable so that a deliberately
  /// broken formula can be shown to fail the suite.
  std::function<double(double a, int tau)> analytic_threshold;
  /// Check wall-clock budgets as part of pass/fail.
  bool enforce_budgets = true;
};

struct VerifyReport {
  std::vector<CriterionResult> results;

  bool all_passed() const noexcept;
  /// "PASS  1 thresholds  <detail>" lines, without timings.
  std::string table() const;
};

/// Throws std::invalid_argument for unknown names in options.only.
VerifyReport run_verify(const VerifyOptions& options, std::ostream* progress = nullptr);

}  // namespace staleness::verify

#endif  // STALENESS_VERIFY_HPP
