// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#include "hbtcal/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "hbtcal/bounds.hpp"
#include "hbtcal/coincidence.hpp"
#include "hbtcal/error.hpp"

namespace hbtcal {

double factorial_moment(const PhotonSource& source, int r) {
  require(r >= 1, ErrorCode::invalid_argument, "factorial moment order must be >= 1");
  const double m = source.falling_moment(r);
  require(std::isfinite(m), ErrorCode::unsupported_source, "factorial moment diverges");
  return m;
}

double normalized_moment(const PhotonSource& source, int r) {
  const double moment = factorial_moment(source, r);
  const double mean = source.mean();
  require(mean > 0.0, ErrorCode::unsupported_source, "normalized moment undefined for a vacuum source");
  return moment / std::pow(mean, r);
}

namespace {

OptimalityFamilyCheck check_family(const PhotonSource& source, int detectors) {
  OptimalityFamilyCheck out;
  out.detectors = detectors;
  const double p_top = source.probability(detectors - 1);
  for (int n = detectors - 3; n >= 0; n -= 2) {
    const double rhs = static_cast<double>(binomial(detectors, n)) * p_top / detectors;
    const bool ok = source.probability(n) > rhs;
    out.population_checks.emplace_back(n, ok);
    out.population_pass = out.population_pass && ok;
  }
  // <n> < g^(D-1)/g^(D) is <(n)_D> < <(n)_{D-1}> once <n> > 0.
  const double lower = source.falling_moment(detectors - 1);
  const double upper = source.falling_moment(detectors);
  require(std::isfinite(lower) && std::isfinite(upper), ErrorCode::unsupported_source, "factorial moment diverges");
  const double mean = source.mean();
  out.moment_ratio = upper == 0.0 ? std::numeric_limits<double>::infinity() : lower * mean / upper;
  out.moment_pass = mean < out.moment_ratio;
  out.limit_value = (lower - upper) / std::tgamma(detectors);
  return out;
}

}  // namespace

OptimalityPrecheck optimality_precheck(const PhotonSource& source, int detectors) {
  require(detectors >= 2, ErrorCode::invalid_argument, "precheck needs D >= 2");
  const double mean = source.mean();
  require(mean > 0.0, ErrorCode::unsupported_source, "precheck undefined for a vacuum source");
  OptimalityPrecheck out;
  out.mean = mean;
  out.s = check_family(source, detectors);
  out.s_prime = check_family(source, detectors - 1);
  return out;
}

double eta0_projection_limit(int detectors, int n, int m) {
  require(n >= 0 && n <= detectors, ErrorCode::invalid_argument, "n outside 0..D");
  double value = 1.0;
  for (int k = 0; k <= detectors; ++k) {
    if (k != n) value *= m - k;
  }
  const double sign = (detectors - n) % 2 == 0 ? 1.0 : -1.0;
  return value * sign / (std::tgamma(n + 1.0) * std::tgamma(detectors - n + 1.0));
}

EtaScalingTable eta_scaling_diagnostic(const PhotonSource& source, int detectors,
                                       const std::vector<double>& eta_values) {
  require(detectors >= 2, ErrorCode::invalid_argument, "eta scaling needs D >= 2");
  EtaScalingTable table;
  table.detectors = detectors;
  for (double eta : eta_values) {
    const auto small = DetectorSetup::uniform(detectors - 1, eta);
    const auto large = DetectorSetup::uniform(detectors, eta);
    const BoundsEngine small_engine(small);
    const BoundsEngine large_engine(large);
    const auto c_small = c_obs_analytic(small, source);
    const auto c_large = c_obs_analytic(large, source);
    EtaScalingRow row;
    row.eta = eta;
    for (int n = 0; n < detectors; ++n) {
      row.gap.push_back(small_engine.s_basis().project(n, c_small) - large_engine.s_prime_basis().project(n, c_large));
    }
    table.rows.push_back(std::move(row));
  }

  table.exponents.assign(static_cast<std::size_t>(detectors), std::numeric_limits<double>::quiet_NaN());
  if (table.rows.size() < 2) return table;
  for (int n = 0; n < detectors; ++n) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    bool usable = true;
    for (const auto& row : table.rows) {
      const double g = std::abs(row.gap[static_cast<std::size_t>(n)]);
      if (!(g > 0.0)) {
        usable = false;
        break;
      }
      const double x = std::log(row.eta), y = std::log(g);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    if (!usable) continue;
    const double k = static_cast<double>(table.rows.size());
    table.exponents[static_cast<std::size_t>(n)] = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  }
  return table;
}

}  // namespace hbtcal
