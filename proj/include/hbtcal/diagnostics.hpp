// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "hbtcal/photon_source.hpp"

namespace hbtcal {

/// <(n)_r> = <n(n-1)...(n-r+1)>, r >= 1.
double factorial_moment(const PhotonSource& source, int r);

/// g^(r)(0) = <(n)_r> / <n>^r. Needs a nonzero mean.
double normalized_moment(const PhotonSource& source, int r);

/// Sufficient optimality conditions for one bound family evaluated with a
/// given detector count (D for the S family, D-1 for S').
struct OptimalityFamilyCheck {
  int detectors = 0;
  /// (n, passed) for n = D-3, D-5, ... >= 0.
  std::vector<std::pair<int, bool>> population_checks;
  bool population_pass = true;
  /// g^(D-1)(0) / g^(D)(0); infinite when <(n)_D> vanishes.
  double moment_ratio = 0.0;
  bool moment_pass = false;
  /// Small-eta limit of c_obs . d_{D-1}^(S): (<(n)_{D-1}> - <(n)_D>) / (D-1)!.
  double limit_value = 0.0;

  [[nodiscard]] bool passed() const noexcept { return population_pass && moment_pass; }
};

struct OptimalityPrecheck {
  double mean = 0.0;
  OptimalityFamilyCheck s;
  OptimalityFamilyCheck s_prime;
};

OptimalityPrecheck optimality_precheck(const PhotonSource& source, int detectors);

/// Small-eta limit of c_m . d_n^(S) for uniform efficiencies:
/// m(m-1)...(m-D) / (m-n) * (-1)^(D-n) / (n! (D-n)!).
double eta0_projection_limit(int detectors, int n, int m);

struct EtaScalingRow {
  double eta = 0.0;
  /// p_n^(S, D-1) - p_n^(S', D) for n = 0..D-1.
  std::vector<double> gap;
};

struct EtaScalingTable {
  int detectors = 0;
  std::vector<EtaScalingRow> rows;
  /// Least-squares slope of log|gap_n| against log eta (NaN when any gap is 0).
  std::vector<double> exponents;
};

/// Runs the S family with D-1 uniform detectors and the S' family with D
/// uniform detectors on the same source at each eta.
EtaScalingTable eta_scaling_diagnostic(const PhotonSource& source, int detectors,
                                       const std::vector<double>& eta_values);

}  // namespace hbtcal
