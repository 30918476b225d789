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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "staleness/charpoly.hpp"
#include "staleness/errors.hpp"
#include "oracles.hpp"

namespace staleness {
namespace {

using cd = std::complex<double>;

Polynomial FromRoots(const std::vector<cd>& roots) {
  std::vector<cd> c{1.0};
  for (const auto& r : roots) {
    std::vector<cd> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  std::vector<double> real;
  for (const auto& x : c) real.push_back(x.real());
  return Polynomial(real);
}

// Real polynomial with roots of modulus in [lo, hi]: conjugate pairs plus an
// optional real root.
std::vector<cd> RandomRoots(std::mt19937_64& rng, int degree, double lo, double hi) {
  std::uniform_real_distribution<double> mod(lo, hi);
  std::uniform_real_distribution<double> arg(0.0, std::numbers::pi);
  std::vector<cd> r;
  while (static_cast<int>(r.size()) + 1 < degree) {
    const auto z = std::polar(mod(rng), arg(rng));
    r.push_back(z);
    r.push_back(std::conj(z));
  }
  if (static_cast<int>(r.size()) < degree) r.push_back(rng() % 2 ? mod(rng) : -mod(rng));
  return r;
}

std::vector<double> SortedMagnitudes(const std::vector<cd>& roots) {
  std::vector<double> m;
  for (const auto& z : roots) m.push_back(std::abs(z));
  std::sort(m.begin(), m.end());
  return m;
}

TEST(AllRoots, Examples) {
  auto rs = all_roots(Polynomial({-1.0, 0.0, 1.0}));
  ASSERT_EQ(rs.roots.size(), 2u);
  std::vector<double> re{rs.roots[0].real(), rs.roots[1].real()};
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], -1.0, 1e-14);
  EXPECT_NEAR(re[1], 1.0, 1e-14);

  rs = all_roots(Polynomial({1.0, -1.0, 1.0}));
  for (const auto& z : rs.roots) {
    EXPECT_NEAR(std::abs(z), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(z.imag()), std::sqrt(3.0) / 2.0, 1e-14);
  }

  EXPECT_NEAR(max_root_magnitude(Polynomial({0.3, 0.0, -1.0, 1.0})), 0.8127115748911867, 1e-12);
  EXPECT_NEAR(max_root_magnitude(Polynomial({0.5, 0.0, -1.0, 1.0})), 0.9405563125721483, 1e-12);
}

TEST(AllRoots, ZeroRootsAreExact) {
  const auto rs = all_roots(Polynomial({0.0, 0.0, 0.0, 1.0}));
  ASSERT_EQ(rs.roots.size(), 3u);
  for (const auto& z : rs.roots) EXPECT_EQ(z, cd(0.0, 0.0));
  EXPECT_TRUE(is_stable(Polynomial({0.0, 0.5})));
}

TEST(AllRoots, ReportsNoConvergence) {
  try {
    all_roots(Polynomial({1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 3.0, 1.0}), 1e-13, 1);
    FAIL() << "expected NoConvergence";
  } catch (const NoConvergence& e) {
    EXPECT_EQ(e.best_roots().size(), 8u);
    EXPECT_GE(e.iterations(), 1);
  }
}

TEST(MaxRootMagnitude, ThresholdCases) {
  EXPECT_NEAR(max_root_magnitude(char_poly_plain(2.0, 1.0, 0)), 1.0, 1e-9);
  const double eta = 2.0 * std::sin(std::numbers::pi / 34.0);
  EXPECT_NEAR(max_root_magnitude(char_poly_plain(eta, 1.0, 8)), 1.0, 1e-7);
  EXPECT_LT(max_root_magnitude(char_poly_plain(1e-6, 1.0, 16)), 1.0);
}

TEST(IsStable, Examples) {
  EXPECT_FALSE(is_stable(Polynomial({1.0, -1.0, 1.0})));
  // Companion eigensolve: 0.97095 at eta = 0.1 and 1.00534 at eta = 0.3.
  EXPECT_TRUE(is_stable(char_poly_momentum(0.1, 1.0, 4, 0.9)));
  EXPECT_NEAR(max_root_magnitude(char_poly_momentum(0.1, 1.0, 4, 0.9)), 0.9709495819721429, 1e-10);
  EXPECT_FALSE(is_stable(char_poly_momentum(0.3, 1.0, 4, 0.9)));
  EXPECT_TRUE(is_stable(Polynomial({0.3, 0.0, -1.0, 1.0}), 0.1));
  EXPECT_FALSE(is_stable(Polynomial({0.3, 0.0, -1.0, 1.0}), 0.2));
}

TEST(AllRoots, MatchesCompanionEigensolve) {
  for (int tau = 0; tau <= 64; tau += 3) {
    for (double eta : {0.01, 0.05, 0.2}) {
      for (const auto& p : {char_poly_plain(eta, 1.0, tau), char_poly_momentum(eta, 1.0, tau, 0.7),
                            char_poly_shifted(eta, 1.0, tau, 0.7)}) {
        EXPECT_NEAR(max_root_magnitude(p), oracle::companion_max_magnitude(p.coeffs()), 1e-8)
            << p.to_csv();
      }
    }
  }
  const auto p = char_poly_stochastic(0.02, 1.0, pmf_uniform(1, 64));
  EXPECT_NEAR(max_root_magnitude(p), oracle::companion_max_magnitude(p.coeffs()), 1e-8);
}

TEST(AllRoots, ResidualsConjugatesAndProduct) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 300; ++trial) {
    const int degree = 1 + static_cast<int>(rng() % 80);
    std::vector<double> c(static_cast<std::size_t>(degree) + 1);
    for (auto& x : c) x = normal(rng);
    const Polynomial p(c);
    const auto rs = all_roots(p);
    ASSERT_EQ(static_cast<int>(rs.roots.size()), p.degree());
    EXPECT_LE(rs.max_residual(), kMaxScaledResidual);
    double log_product = 0.0;
    for (const auto& z : rs.roots) {
      log_product += std::log(std::abs(z));
      if (std::abs(z.imag()) > 1e-9) {
        const auto partner = std::min_element(rs.roots.begin(), rs.roots.end(), [&](cd u, cd v) {
          return std::abs(u - std::conj(z)) < std::abs(v - std::conj(z));
        });
        EXPECT_LE(std::abs(*partner - std::conj(z)), 1e-9 * std::max(1.0, std::abs(z)));
      }
    }
    EXPECT_NEAR(log_product, std::log(std::abs(p[0] / p.leading())), 1e-8);
  }
}

TEST(AllRoots, ScaleInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> c(2 + trial % 20);
    for (auto& x : c) x = u(rng);
    const Polynomial p(c);
    std::vector<double> scaled;
    for (double x : c) scaled.push_back(x * 1e3 * (trial + 1));
    const auto a = SortedMagnitudes(all_roots(p).roots);
    const auto b = SortedMagnitudes(all_roots(Polynomial(scaled)).roots);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-8 * std::max(1.0, a[i]));
  }
}

TEST(IsStable, FuzzFromKnownRoots) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> outer(1.05, 1.5);
  for (int trial = 0; trial < 1000; ++trial) {
    // Expanding from roots amplifies coefficient error quickly with degree;
    // keep degrees where double coefficients still pin the roots.
    const int degree = 1 + static_cast<int>(rng() % 24);
    const auto inside = RandomRoots(rng, degree, 0.0, 0.95);
    ASSERT_TRUE(is_stable(FromRoots(inside))) << trial;

    // Push one root (and its conjugate partner) outside the unit circle.
    auto outside = inside;
    std::size_t i = rng() % outside.size();
    const double r = outer(rng);
    if (outside[i].imag() != 0.0) {
      i -= i % 2;
      outside[i] *= r / std::abs(outside[i]);
      outside[i + 1] = std::conj(outside[i]);
    } else {
      outside[i] = outside[i].real() < 0.0 ? -r : r;
    }
    ASSERT_FALSE(is_stable(FromRoots(outside))) << trial;
  }
}

}  // namespace
}  // namespace staleness
