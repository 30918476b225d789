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

#include "staleness/polynomial.hpp"

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "staleness/errors.hpp"
#include "staleness/format.hpp"

namespace staleness {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw DomainError("Polynomial: non-finite coefficient");
  }
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (coeffs_.empty()) throw DomainError("Polynomial: all coefficients are zero");
}

double Polynomial::evaluate(double z) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::complex<double> Polynomial::evaluate(std::complex<double> z) const noexcept {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::string Polynomial::to_csv() const { return join_doubles(coeffs_); }

std::string Polynomial::to_json() const { return "[" + join_doubles(coeffs_) + "]"; }

Polynomial Polynomial::from_csv(std::string_view row) {
  std::vector<double> coeffs;
  for (const auto& field : split(trim(row), ',')) coeffs.push_back(parse_double(field));
  return Polynomial(std::move(coeffs));
}

Polynomial Polynomial::from_json(std::string_view text) {
  const auto parsed = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (!parsed.is_array()) throw DomainError("Polynomial: expected a JSON array of numbers");
  std::vector<double> coeffs;
  for (const auto& v : parsed) {
    if (!v.is_number()) throw DomainError("Polynomial: expected a JSON array of numbers");
    coeffs.push_back(v.get<double>());
  }
  return Polynomial(std::move(coeffs));
}

TermAccumulator& TermAccumulator::add(int exponent, double coefficient) {
  if (exponent < 0) throw DomainError("TermAccumulator: negative exponent");
  terms_[exponent] += coefficient;
  return *this;
}

Polynomial TermAccumulator::build() const {
  if (terms_.empty()) throw DomainError("TermAccumulator: no terms");
  std::vector<double> coeffs(static_cast<std::size_t>(terms_.rbegin()->first) + 1, 0.0);
  for (const auto& [exponent, c] : terms_) coeffs[static_cast<std::size_t>(exponent)] = c;
  return Polynomial(std::move(coeffs));
}

}  // namespace staleness
