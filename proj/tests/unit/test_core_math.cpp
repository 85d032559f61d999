// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hbtcal/coincidence.hpp"
#include "hbtcal/core_math.hpp"
#include "hbtcal/error.hpp"

using namespace hbtcal;

TEST(Binomial, SmallValues) {
  EXPECT_EQ(binomial(4, 2), 6U);
  EXPECT_EQ(binomial(24, 12), 2704156U);
  EXPECT_EQ(binomial(5, 0), 1U);
  EXPECT_EQ(binomial(3, 4), 0U);
}

TEST(SubsetIndex, MaskRoundTrip) {
  const SubsetIndex w({1, 3, 4});
  EXPECT_EQ(w.mask(), 0b1101U);
  EXPECT_EQ(SubsetIndex::from_mask(w.mask()), w);
  for (std::uint32_t m = 0; m < 64; ++m) EXPECT_EQ(SubsetIndex::from_mask(m).mask(), m);
}

TEST(SubsetIndex, RejectsUnsortedOrDuplicate) {
  EXPECT_THROW(SubsetIndex({2, 1}), Error);
  EXPECT_THROW(SubsetIndex({1, 1}), Error);
  EXPECT_THROW(SubsetIndex({0}), Error);
}

TEST(SubsetsOfSize, Enumeration) {
  const auto singles = subsets_of_size(2, 1);
  ASSERT_EQ(singles.size(), 2U);
  EXPECT_EQ(singles[0].members(), std::vector<int>{1});
  EXPECT_EQ(singles[1].members(), std::vector<int>{2});

  const auto empty = subsets_of_size(4, 0);
  ASSERT_EQ(empty.size(), 1U);
  EXPECT_TRUE(empty[0].empty());

  const auto pairs = subsets_of_size(4, 2);
  ASSERT_EQ(pairs.size(), 6U);
  const std::vector<std::vector<int>> expected{{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};
  for (std::size_t i = 0; i < pairs.size(); ++i) EXPECT_EQ(pairs[i].members(), expected[i]);
}

TEST(SubsetsOfSize, CountsMatchBinomial) {
  for (int d = 0; d <= 10; ++d) {
    for (int j = 0; j <= d; ++j) EXPECT_EQ(subsets_of_size(d, j).size(), binomial(d, j));
  }
}

TEST(SubsetsOfSize, Errors) {
  EXPECT_THROW(subsets_of_size(3, 4), Error);
  EXPECT_THROW(subsets_of_size(25, 1), Error);
}

TEST(Omega, Examples) {
  EXPECT_EQ(omega(4, 2, 3), make_rational(0, 1));
  EXPECT_EQ(omega(5, 3, 0), make_rational(1, 1));
  EXPECT_EQ(omega(4, 2, 1), make_rational(1, 2));
  EXPECT_THROW(omega(4, 5, 1), Error);
  EXPECT_THROW(omega(4, 1, -1), Error);
}

TEST(Omega, ExactForLargeD) {
  // omega_{r,j} binom(D, r) = binom(D-j, r-j) must hold exactly up to the cap.
  for (int d = 1; d <= kMaxDetectors; ++d) {
    for (int r = 0; r <= d; ++r) {
      EXPECT_EQ(omega(d, r, 0), make_rational(1, 1));
      for (int j = 0; j <= r; ++j) {
        const auto w = omega(d, r, j);
        const auto lhs = static_cast<__int128>(w.num) * binomial(d, r);
        const auto rhs = static_cast<__int128>(w.den) * binomial(d - j, r - j);
        EXPECT_TRUE(lhs == rhs) << d << " " << r << " " << j;
      }
    }
  }
}

TEST(Omega, VacuumColumnVanishes) {
  // With n = 0 every (1 - eta_W)^0 is 1, so c_{0,r} = sum_j (-1)^j omega_{r,j} binom(D, j) = 0 for r >= 1.
  for (int d = 1; d <= 12; ++d) {
    for (int r = 1; r <= d; ++r) {
      long double sum = 0;
      for (int j = 0; j <= r; ++j) sum += (j % 2 ? -1.0L : 1.0L) * omega(d, r, j).to_double() * binomial(d, j);
      EXPECT_NEAR(static_cast<double>(sum), 0.0, 1e-9);
    }
  }
}

TEST(ElementaryAverage, Examples) {
  EXPECT_DOUBLE_EQ(elementary_average(DetectorSetup::uniform(3, 0.1), 2), std::pow(0.1, 2));
  EXPECT_DOUBLE_EQ(elementary_average(DetectorSetup::uniform(5, 0.1), 2), std::pow(0.1, 2));
  EXPECT_NEAR(elementary_average(DetectorSetup({0.2, 0.3}), 2), 0.06, 1e-15);
  EXPECT_NEAR(elementary_average(DetectorSetup({0.1, 0.1, 0.1}), 1), 0.1, 1e-15);
  EXPECT_NEAR(elementary_average(DetectorSetup({0.1, 0.2, 0.3}), 2), (0.02 + 0.03 + 0.06) / 3, 1e-15);
  EXPECT_THROW(elementary_average(DetectorSetup({0.1, 0.2}), 3), Error);
  EXPECT_THROW(elementary_average(DetectorSetup({0.1, 0.2}), 0), Error);
}

TEST(Xi, Examples) {
  EXPECT_NEAR(xi(DetectorSetup({0.2, 0.3}), 2, 1), -0.04, 1e-14);
  EXPECT_EQ(xi(DetectorSetup({0.25, 0.25}), 2, 1), 0.0);
  const auto u = DetectorSetup::uniform(4, 0.025);
  for (int i = 2; i <= 4; ++i) {
    for (int j = 1; j < i; ++j) EXPECT_EQ(xi(u, i, j), 0.0);
  }
  EXPECT_THROW(xi(u, 2, 2), Error);
  EXPECT_THROW(xi(u, 5, 1), Error);
}

TEST(BinaryEntropy, Values) {
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
  EXPECT_NEAR(binary_entropy(0.11), 0.49992, 1e-5);
  EXPECT_THROW(binary_entropy(-0.1), Error);
  EXPECT_THROW(binary_entropy(1.1), Error);
}

TEST(BinaryEntropy, Symmetric) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    EXPECT_NEAR(binary_entropy(x), binary_entropy(1.0 - x), 1e-12);
    EXPECT_LE(binary_entropy(x), 1.0);
  }
}
