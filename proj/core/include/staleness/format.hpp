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

#ifndef STALENESS_FORMAT_HPP
#define STALENESS_FORMAT_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace staleness {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Parses a full decimal string; throws DomainError on trailing garbage.
double parse_double(std::string_view text);
long parse_long(std::string_view text);

std::string join_doubles(std::span<const double> values, char sep = ',');

std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

}  // namespace staleness

#endif  // STALENESS_FORMAT_HPP
