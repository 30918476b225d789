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

#include <gtest/gtest.h>

#include <random>

#include "staleness/errors.hpp"
#include "staleness/roots.hpp"
#include "oracles.hpp"

namespace staleness {
namespace {

void ExpectCoeffs(const Polynomial& p, const std::vector<double>& expected) {
  ASSERT_EQ(p.degree() + 1, static_cast<int>(expected.size())) << p.to_csv();
  for (std::size_t k = 0; k < expected.size(); ++k) {
    EXPECT_NEAR(p[static_cast<int>(k)], expected[k], 1e-15) << "z^" << k << " in " << p.to_csv();
  }
}

std::vector<std::complex<double>> RandomPoints(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.5, 1.5);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  std::vector<std::complex<double>> out;
  for (int i = 0; i < 20; ++i) out.push_back(std::polar(radius(rng), angle(rng)));
  return out;
}

void ExpectSame(std::complex<double> got, std::complex<double> want) {
  EXPECT_LE(std::abs(got - want), 1e-12 * std::max(1.0, std::abs(want))) << got << " vs " << want;
}

TEST(CharPolyPlain, Examples) {
  ExpectCoeffs(char_poly_plain(2.0, 1.0, 0), {1.0, 1.0});
  ExpectCoeffs(char_poly_plain(1.0, 1.0, 1), {1.0, -1.0, 1.0});
  ExpectCoeffs(char_poly_plain(0.5, 1.0, 2), {0.5, 0.0, -1.0, 1.0});
  EXPECT_NEAR(max_root_magnitude(char_poly_plain(2.0, 1.0, 0)), 1.0, 1e-9);
  EXPECT_LT(max_root_magnitude(char_poly_plain(0.5, 1.0, 2)), 1.0);
}

TEST(CharPolyPlain, RejectsBadArguments) {
  EXPECT_THROW(char_poly_plain(0.0, 1.0, 2), DomainError);
  EXPECT_THROW(char_poly_plain(0.1, -1.0, 2), DomainError);
  EXPECT_THROW(char_poly_plain(0.1, 1.0, -1), DomainError);
}

TEST(CharPolyMomentum, Examples) {
  ExpectCoeffs(char_poly_momentum(1.0, 1.0, 2, 0.0), {1.0, 0.0, -1.0, 1.0});
  EXPECT_EQ(char_poly_momentum(1.0, 1.0, 2, 0.0), char_poly_plain(1.0, 1.0, 2));
  ExpectCoeffs(char_poly_momentum(0.5, 1.0, 1, 0.5), {0.75, -1.5, 1.0});
  const auto p = char_poly_momentum(0.37, 2.1, 3, 0.9);
  ASSERT_EQ(p.degree(), 4);
  EXPECT_DOUBLE_EQ(p[3], -1.9);
  EXPECT_DOUBLE_EQ(p[2], 0.9);
}

TEST(CharPolyMomentum, TauZeroIsMultipliedThroughByZ) {
  // z - (1+m) + m/z + eta(1-m)a, times z.
  ExpectCoeffs(char_poly_momentum(0.5, 1.0, 0, 0.5), {0.5, -1.5 + 0.25, 1.0});
}

TEST(CharPolyMomentum, RejectsBadMomentum) {
  EXPECT_THROW(char_poly_momentum(0.1, 1.0, 2, 1.0), DomainError);
  EXPECT_THROW(char_poly_momentum(0.1, 1.0, 2, -0.1), DomainError);
}

TEST(CharPolyShifted, Examples) {
  ExpectCoeffs(char_poly_shifted(1.0, 1.0, 0, 0.0), {0.0, 0.0, 1.0});
  const auto p = char_poly_shifted(0.05, 1.0, 8, 0.9);
  ASSERT_EQ(p.degree(), 10);
  EXPECT_DOUBLE_EQ(p[0], 0.9);
  EXPECT_NEAR(p[1], 0.05 * 0.1 - 0.9, 1e-15);
  EXPECT_DOUBLE_EQ(p[9], -1.0);
  EXPECT_DOUBLE_EQ(p[10], 1.0);
  for (int tau = 0; tau < 10; ++tau) {
    const auto shifted = char_poly_shifted(0.3, 1.3, tau, 0.0);
    const auto plain = char_poly_plain(0.3, 1.3, tau);
    ASSERT_EQ(shifted.degree(), plain.degree() + 1);
    EXPECT_EQ(shifted[0], 0.0);
    for (int k = 0; k <= plain.degree(); ++k) EXPECT_DOUBLE_EQ(shifted[k + 1], plain[k]);
  }
}

TEST(CharPolyStochastic, Examples) {
  EXPECT_EQ(char_poly_stochastic(0.2, 1.0, DelayModel::pmf({{5, 1.0}})),
            char_poly_plain(0.2, 1.0, 5));
  ExpectCoeffs(char_poly_stochastic(0.5, 1.0, pmf_uniform(1, 2)), {0.25, 0.25, -1.0, 1.0});
  const auto g = char_poly_stochastic(0.1, 2.0, pmf_discrete_gaussian(4));
  EXPECT_EQ(g.degree(), 9);
  EXPECT_NEAR(g.evaluate(1.0), 0.2, 1e-15);
}

TEST(CharPoly, DispatcherRejectsPmfWithMomentum) {
  EXPECT_THROW(char_poly(OptimizerSpec::momentum(0.1, 0.5), 1.0, pmf_uniform(1, 3)),
               DomainError);
  EXPECT_EQ(char_poly(OptimizerSpec::shifted(0.1, 0.5), 1.0, DelayModel::constant(3)),
            char_poly_shifted(0.1, 1.0, 3, 0.5));
  EXPECT_EQ(char_poly(OptimizerSpec::plain(0.1), 1.0, pmf_uniform(2, 2)),
            char_poly_plain(0.1, 1.0, 2));
}

// Property: the coefficient arrays agree with the expressions evaluated
// literally, including every tau where exponents collide.
TEST(CharPolyProperty, MatchesLiteralExpressions) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> gain(0.01, 3.0);
  std::uniform_real_distribution<double> mom(0.0, 0.99);
  for (int tau = 0; tau <= 40; ++tau) {
    const double eta = gain(rng);
    const double a = gain(rng);
    const double m = mom(rng);
    const auto plain = char_poly_plain(eta, a, tau);
    const auto momentum = char_poly_momentum(eta, a, tau, m);
    const auto shifted = char_poly_shifted(eta, a, tau, m);
    for (const auto z : RandomPoints(static_cast<std::uint64_t>(tau))) {
      ExpectSame(plain.evaluate(z), oracle::plain_expr(eta, a, tau, z));
      ExpectSame(momentum.evaluate(z), oracle::momentum_expr(eta, a, tau, m, z));
      ExpectSame(shifted.evaluate(z), oracle::shifted_expr(eta, a, tau, m, z));
    }
  }
  for (int hi = 1; hi <= 30; ++hi) {
    for (const auto& delay : {pmf_uniform(1 + hi / 3, hi), pmf_discrete_gaussian(hi)}) {
      std::vector<std::pair<int, double>> pmf;
      for (const auto& e : delay.entries()) pmf.emplace_back(e.delay, e.probability);
      const auto p = char_poly_stochastic(0.2, 1.5, delay);
      EXPECT_NEAR(p.evaluate(1.0), 0.3, 1e-12);
      for (const auto z : RandomPoints(100 + static_cast<std::uint64_t>(hi))) {
        ExpectSame(p.evaluate(z), oracle::stochastic_expr(0.2, 1.5, pmf, z));
      }
    }
  }
}

TEST(CharPolyProperty, ZeroMomentumHasPlainRoots) {
  for (int tau = 0; tau <= 12; ++tau) {
    const double want = max_root_magnitude(char_poly_plain(0.15, 1.0, tau));
    EXPECT_NEAR(max_root_magnitude(char_poly_momentum(0.15, 1.0, tau, 0.0)), want, 1e-10);
    EXPECT_NEAR(max_root_magnitude(char_poly_shifted(0.15, 1.0, tau, 0.0)), want, 1e-10);
    EXPECT_NEAR(char_poly_plain(0.15, 1.0, tau).evaluate(1.0), 0.15, 1e-15);
  }
}

}  // namespace
}  // namespace staleness
