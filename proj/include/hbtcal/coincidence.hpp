// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hbtcal/core_math.hpp"
#include "hbtcal/photon_source.hpp"

namespace hbtcal {

/// D threshold detectors with overall efficiencies eta_1..eta_D (branching
/// included). Construction only checks shape; physical admissibility is
/// checked by validate_setup.
class DetectorSetup {
 public:
  explicit DetectorSetup(std::vector<double> efficiencies);
  static DetectorSetup uniform(int detectors, double eta);

  [[nodiscard]] int detectors() const noexcept { return static_cast<int>(eta_.size()); }
  [[nodiscard]] std::span<const double> efficiencies() const noexcept { return eta_; }
  /// 1-based.
  [[nodiscard]] double efficiency(int i) const { return eta_.at(static_cast<std::size_t>(i - 1)); }
  [[nodiscard]] double mean_efficiency() const noexcept;
  [[nodiscard]] bool is_uniform() const noexcept;
  /// Sum of efficiencies of detectors in the mask.
  [[nodiscard]] double mask_sum(std::uint32_t mask) const noexcept;

 private:
  std::vector<double> eta_;
};

struct ValidationReport {
  std::vector<std::string> violations;
  [[nodiscard]] bool valid() const noexcept { return violations.empty(); }
};

ValidationReport validate_setup(const DetectorSetup& setup);
/// Throws invalid_argument naming every violated invariant.
void require_valid(const DetectorSetup& setup);

/// (1, c_obs,1, ..., c_obs,D).
class CoincidenceVector {
 public:
  explicit CoincidenceVector(std::vector<double> entries);

  [[nodiscard]] int detectors() const noexcept { return static_cast<int>(entries_.size()) - 1; }
  [[nodiscard]] double operator[](int r) const { return entries_.at(static_cast<std::size_t>(r)); }
  [[nodiscard]] std::span<const double> entries() const noexcept { return entries_; }
  [[nodiscard]] bool nonincreasing() const noexcept;

 private:
  std::vector<double> entries_;
};

/// Probability that every detector in W clicks for an n-photon pulse, by
/// inclusion-exclusion over subsets of W.
double subset_coincidence(const DetectorSetup& setup, int n, const SubsetIndex& subset);

/// c_{n,r}: size-r subset coincidence averaged over all size-r subsets.
double c_nr(const DetectorSetup& setup, int n, int r);

/// c_n = (1, c_{n,1}, ..., c_{n,D}).
std::vector<double> coincidence_column(const DetectorSetup& setup, int n);

/// c_{r,r} = r! s_r, the leading coefficient used to normalize row r.
double diagonal_coincidence(const DetectorSetup& setup, int r);

/// Closed-form averaged coincidences through the source's generating function.
CoincidenceVector c_obs_analytic(const DetectorSetup& setup, const PhotonSource& source);

/// sum_n p_n c_n for an explicit (not necessarily normalized) weight vector.
std::vector<double> coincidences_of_weights(const DetectorSetup& setup, std::span<const double> weights);

/// Probability that all detectors in the mask click on one pulse.
double subset_click_probability(const DetectorSetup& setup, const PhotonSource& source, std::uint32_t mask);

}  // namespace hbtcal
