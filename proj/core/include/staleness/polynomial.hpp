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

#ifndef STALENESS_POLYNOMIAL_HPP
#define STALENESS_POLYNOMIAL_HPP

#include <complex>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace staleness {

/// Real polynomial in z, coefficients in ascending order (coeffs()[k] multiplies z^k).
/// Trailing (high-order) zeros are trimmed on construction so the leading
/// coefficient is always nonzero.
class Polynomial {
 public:
  explicit Polynomial(std::vector<double> coeffs);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator[](int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
  double leading() const noexcept { return coeffs_.back(); }

  double evaluate(double z) const noexcept;
  std::complex<double> evaluate(std::complex<double> z) const noexcept;

  /// "c0,c1,...,cn" with shortest round-trip decimals.
  std::string to_csv() const;
  /// JSON array of numbers, same formatting as to_csv().
  std::string to_json() const;
  static Polynomial from_csv(std::string_view row);
  static Polynomial from_json(std::string_view text);

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

/// Collects (exponent, coefficient) terms, summing colliding exponents.
/// Every characteristic-polynomial builder goes through this so that small-delay
/// cases where two terms land on the same power are added, not overwritten.
class TermAccumulator {
 public:
  TermAccumulator& add(int exponent, double coefficient);
  Polynomial build() const;

 private:
  std::map<int, double> terms_;
};

}  // namespace staleness

#endif  // STALENESS_POLYNOMIAL_HPP
