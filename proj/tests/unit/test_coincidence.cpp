// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hbtcal/coincidence.hpp"
#include "hbtcal/error.hpp"
#include "oracles.hpp"

using namespace hbtcal;

namespace {

bool has_violation(const ValidationReport& r, const std::string& tag) {
  for (const auto& v : r.violations) {
    if (v.find(tag) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST(ValidateSetup, Examples) {
  EXPECT_TRUE(validate_setup(DetectorSetup::uniform(4, 0.025)).valid());
  const auto sum = validate_setup(DetectorSetup({0.6, 0.5}));
  EXPECT_FALSE(sum.valid());
  EXPECT_TRUE(has_violation(sum, "efficiency-sum"));
  const auto order = validate_setup(DetectorSetup({0.30, 0.02, 0.02}));
  EXPECT_FALSE(order.valid());
  EXPECT_TRUE(has_violation(order, "efficiency-ordering"));
  const auto range = validate_setup(DetectorSetup({0.0, 0.1}));
  EXPECT_TRUE(has_violation(range, "efficiency-range"));
}

TEST(ValidateSetup, OrderingMatchesPairwiseEnumeration) {
  // Every W, W' with |W| < |W'| must have sum_W < sum_W'.
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const int d = 2 + t % 4;
    const auto eta = oracle::random_efficiencies(rng, d, 0.01, 0.15, 0.9);
    bool ok = true;
    double total = 0;
    for (double e : eta) total += e;
    const std::uint32_t masks = 1U << d;
    for (std::uint32_t a = 0; a < masks && ok; ++a) {
      for (std::uint32_t b = 0; b < masks && ok; ++b) {
        if (std::popcount(a) >= std::popcount(b)) continue;
        double sa = 0, sb = 0;
        for (int i = 0; i < d; ++i) {
          if (a >> i & 1U) sa += eta[static_cast<std::size_t>(i)];
          if (b >> i & 1U) sb += eta[static_cast<std::size_t>(i)];
        }
        ok = sa < sb;
      }
    }
    const auto report = validate_setup(DetectorSetup(eta));
    EXPECT_EQ(!has_violation(report, "efficiency-ordering"), ok);
    if (total < 1.0) EXPECT_EQ(report.valid(), ok);
  }
}

TEST(DetectorSetup, ShapeChecks) {
  EXPECT_THROW(DetectorSetup(std::vector<double>{}), Error);
  EXPECT_THROW(DetectorSetup(std::vector<double>(25, 0.01)), Error);
  EXPECT_THROW(DetectorSetup({std::nan(""), 0.1}), Error);
  EXPECT_TRUE(DetectorSetup::uniform(3, 0.1).is_uniform());
  EXPECT_FALSE(DetectorSetup({0.1, 0.11}).is_uniform());
  EXPECT_DOUBLE_EQ(DetectorSetup({0.1, 0.3}).mean_efficiency(), 0.2);
}

TEST(CoincidenceVector, Invariants) {
  EXPECT_THROW(CoincidenceVector({0.9, 0.1}), Error);
  EXPECT_THROW(CoincidenceVector({1.0, 1.1}), Error);
  EXPECT_THROW(CoincidenceVector({1.0}), Error);
  EXPECT_TRUE(CoincidenceVector({1.0, 0.1, 0.01}).nonincreasing());
  EXPECT_FALSE(CoincidenceVector({1.0, 0.0, 0.01}).nonincreasing());
}

TEST(SubsetCoincidence, Examples) {
  const DetectorSetup s({0.2, 0.3});
  EXPECT_EQ(subset_coincidence(s, 0, SubsetIndex({1})), 0.0);
  EXPECT_NEAR(subset_coincidence(s, 2, SubsetIndex({1, 2})), 0.12, 1e-15);
  EXPECT_NEAR(subset_coincidence(s, 1, SubsetIndex({2})), 0.3, 1e-15);
  EXPECT_EQ(subset_coincidence(s, 1, SubsetIndex({1, 2})), 0.0);
  EXPECT_THROW(subset_coincidence(s, 2, SubsetIndex({3})), Error);
}

TEST(CNr, Examples) {
  const DetectorSetup s({0.2, 0.3});
  EXPECT_NEAR(c_nr(s, 2, 2), 0.12, 1e-15);
  EXPECT_EQ(c_nr(s, 1, 2), 0.0);
  EXPECT_EQ(c_nr(s, 5, 0), 1.0);
  EXPECT_THROW(c_nr(s, 2, 3), Error);
  for (int r = 1; r <= 5; ++r) {
    const auto u = DetectorSetup::uniform(5, 0.03);
    EXPECT_NEAR(c_nr(u, r, r), std::tgamma(r + 1.0) * std::pow(0.03, r), 1e-15 * std::pow(0.03, r) * 200);
    EXPECT_NEAR(diagonal_coincidence(u, r), std::tgamma(r + 1.0) * std::pow(0.03, r), 1e-14 * std::pow(0.03, r));
  }
}

TEST(CNr, MatchesRoutingOracle) {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    const int d = 2 + t % 4;
    const auto eta = oracle::random_efficiencies(rng, d, 0.01, 0.18, 0.2);
    const DetectorSetup s(eta);
    if (!validate_setup(s).valid()) continue;
    for (int n = 0; n <= 50; n += (n < 12 ? 1 : 7)) {
      for (int r = 0; r <= d; ++r) {
        const double expect = static_cast<double>(oracle::c_nr(eta, n, r));
        EXPECT_NEAR(c_nr(s, n, r), expect, 1e-13 * std::max(expect, 1e-300) + 1e-300) << n << " " << r;
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST(CNr, DiagonalRelativeAccuracyAtSmallEta) {
  for (double eta : {1e-2, 1e-3, 1e-4}) {
    const auto s = DetectorSetup::uniform(5, eta);
    for (int r = 1; r <= 5; ++r) {
      const double exact = std::tgamma(r + 1.0) * std::pow(eta, r);
      EXPECT_NEAR(c_nr(s, r, r) / exact, 1.0, 1e-12);
    }
  }
}

TEST(CObsAnalytic, Examples) {
  const auto vac = c_obs_analytic(DetectorSetup::uniform(3, 0.1), PhotonSource::vacuum());
  EXPECT_EQ(vac[0], 1.0);
  for (int r = 1; r <= 3; ++r) EXPECT_EQ(vac[r], 0.0);

  const auto pois = c_obs_analytic(DetectorSetup::uniform(4, 0.025), PhotonSource::poissonian(0.5));
  EXPECT_NEAR(pois[1], 1.0 - std::exp(-0.0125), 1e-15);
  EXPECT_NEAR(pois[1], 0.0124222, 1e-7);

  const auto th = c_obs_analytic(DetectorSetup::uniform(2, 0.1), PhotonSource::thermal(1.0));
  EXPECT_NEAR(th[1], 1.0 - 1.0 / 1.1, 1e-15);
}

TEST(CObsAnalytic, MatchesTruncatedSum) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 20; ++t) {
    const int d = 2 + t % 4;
    const auto eta = oracle::random_efficiencies(rng, d, 0.01, 0.15, 0.1);
    const DetectorSetup s(eta);
    if (!validate_setup(s).valid()) continue;
    const double mean = 0.05 + 1.95 * (t % 7) / 6.0;
    for (int kind = 0; kind < 2; ++kind) {
      const auto src = kind == 0 ? PhotonSource::poissonian(mean) : PhotonSource::thermal(mean);
      const auto p = kind == 0 ? oracle::poisson(mean, 200) : oracle::thermal(mean, 200);
      const auto expect = oracle::c_obs(eta, p);
      const auto got = c_obs_analytic(s, src);
      for (int r = 0; r <= d; ++r) {
        EXPECT_NEAR(got[r], static_cast<double>(expect[static_cast<std::size_t>(r)]), 1e-12) << kind << " " << r;
      }
    }
  }
}

TEST(CObsAnalytic, FockSourceEqualsColumn) {
  const DetectorSetup s({0.05, 0.06, 0.055});
  for (int n = 0; n <= 12; ++n) {
    const auto c = c_obs_analytic(s, PhotonSource::fock(n));
    const auto col = coincidence_column(s, n);
    for (int r = 0; r <= 3; ++r) EXPECT_EQ(c[r], col[static_cast<std::size_t>(r)]);
  }
}

TEST(CObsAnalytic, NonincreasingForRandomSources) {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 200; ++t) {
    const int d = 2 + t % 5;
    const DetectorSetup s(oracle::random_efficiencies(rng, d, 0.005, 0.15, 0.1));
    if (!validate_setup(s).valid()) continue;
    const auto p = oracle::random_distribution(rng, 10);
    EXPECT_TRUE(c_obs_analytic(s, PhotonSource::finite(p)).nonincreasing());
    EXPECT_TRUE(c_obs_analytic(s, PhotonSource::poissonian(0.1 + t * 0.02)).nonincreasing());
  }
}

TEST(CObsAnalytic, RefusesInvalidSetup) {
  EXPECT_THROW(c_obs_analytic(DetectorSetup({0.6, 0.5}), PhotonSource::poissonian(0.5)), Error);
}

TEST(CoincidencesOfWeights, LinearInWeights) {
  const DetectorSetup s({0.05, 0.06, 0.055, 0.052});
  const std::vector<double> w{0.5, 0.3, 0.15, 0.05};
  const auto c = coincidences_of_weights(s, w);
  const auto direct = c_obs_analytic(s, PhotonSource::finite(w));
  for (int r = 0; r <= 4; ++r) EXPECT_NEAR(c[static_cast<std::size_t>(r)], direct[r], 1e-16);
}

TEST(SubsetClickProbability, MatchesFoldAverage) {
  const DetectorSetup s({0.05, 0.06, 0.055});
  const auto src = PhotonSource::poissonian(0.8);
  const auto c = c_obs_analytic(s, src);
  const double pair_avg = (subset_click_probability(s, src, 0b011) + subset_click_probability(s, src, 0b101) +
                           subset_click_probability(s, src, 0b110)) /
                          3.0;
  EXPECT_NEAR(pair_avg, c[2], 1e-16);
}
