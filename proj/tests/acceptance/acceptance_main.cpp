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

// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Usage: acceptance_suite [--out DIR] [--only NAME]...

#include <cstring>
#include <filesystem>
#include <iostream>

#include "staleness/verify.hpp"

int main(int argc, char** argv) {
  staleness::verify::VerifyOptions options;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
      options.out_dir = std::filesystem::path(argv[++i]);
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      options.only.emplace_back(argv[++i]);
    } else {
      std::cerr << "usage: acceptance_suite [--out DIR] [--only NAME]...\n";
      return 2;
    }
  }
  try {
    const auto report = staleness::verify::run_verify(options, &std::cout);
    std::size_t passed = 0;
    for (const auto& r : report.results) passed += r.passed;
    std::cout << passed << "/" << report.results.size() << " criteria passed\n";
    return report.all_passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "acceptance_suite: " << e.what() << '\n';
    return 2;
  }
}
