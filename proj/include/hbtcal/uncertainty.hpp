// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hbtcal/bounds.hpp"

namespace hbtcal {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] double width() const noexcept { return hi - lo; }
  [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

enum class EtaScan {
  /// One parameter s in [0, 1]: eta_i = lo_i + s (hi_i - lo_i) for every i.
  uniform_shift,
  /// Full grid over every eta_i independently.
  box,
};

struct UncertaintyInputs {
  /// [eta_i^min, eta_i^max] for i = 1..D.
  std::vector<Interval> eta;
  /// [c_r^min, c_r^max] for r = 0..D (entry 0 is [1, 1]).
  std::vector<Interval> c_obs;
  EtaScan scan = EtaScan::uniform_shift;
  int grid_points = 21;
};

/// Point interval around a nominal setup and coincidence vector.
UncertaintyInputs exact_inputs(const DetectorSetup& setup, const CoincidenceVector& c_obs);

/// Uniform relative eta ambiguity: eta_i (1 +- relative).
std::vector<Interval> relative_eta_box(const DetectorSetup& setup, double relative);

/// Hoeffding interval on every subset click fraction with the budget delta
/// split over all 2^D - 1 subsets, averaged per fold. `subset_clicks` is
/// indexed by detector mask; entry 0 is ignored.
std::vector<Interval> confidence_intervals(int detectors, const std::vector<std::uint64_t>& subset_clicks,
                                           std::uint64_t pulses, double delta);

/// sqrt(ln(2/delta') / (2N)) with delta' = delta / (2^D - 1).
double hoeffding_half_width(int detectors, std::uint64_t pulses, double delta);

struct WorstCaseResult {
  BoundsResult bounds;
  int points_evaluated = 0;
  /// One message per skipped grid point.
  std::vector<std::string> skipped;
};

/// Min of lower bounds and max of upper bounds over the eta box, with the
/// coincidence endpoint chosen per coefficient sign.
WorstCaseResult worstcase_bounds(const UncertaintyInputs& inputs);

struct PropagationEstimate {
  /// Relative shift estimate |dp_n| / p_n for n = 0..D-1.
  std::vector<double> relative;
  /// Same, times the weak-source estimate of p_n.
  std::vector<double> absolute;
  /// p_0 ~ 1 - c~_1 and p_n ~ c~_n.
  std::vector<double> p_estimate;
  /// p_n >= 10 p_{n+1} for n >= 1 on the estimates.
  bool weak_regime = false;
};

/// `relative_c[r]` is |dc_r| / c_r for r = 1..D (entry 0 ignored). The n = 0
/// entry is NaN when the p_0 estimate vanishes.
PropagationEstimate propagation_estimate(const DetectorSetup& setup, const CoincidenceVector& c_obs,
                                         const std::vector<double>& relative_c, double relative_eta);

/// Relative estimate for one n; diagnostic_unavailable for n = 0 when p_0 = 0.
double propagation_estimate_at(const DetectorSetup& setup, const CoincidenceVector& c_obs,
                               const std::vector<double>& relative_c, double relative_eta, int n);

}  // namespace hbtcal
