// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hbtcal/coincidence.hpp"

namespace hbtcal {

/// Click statistics of a pulse train, empirical or simulated.
struct ClickStatistics {
  int detectors = 0;
  std::uint64_t pulses = 0;
  /// subset_counts[W] = pulses on which every detector in mask W clicked;
  /// subset_counts[0] == pulses.
  std::vector<std::uint64_t> subset_counts;
  /// pattern_counts[M] = pulses on which exactly the detectors in M clicked.
  std::vector<std::uint64_t> pattern_counts;
  CoincidenceVector coincidences{std::vector<double>{1.0, 0.0}};
  /// Standard error of each fold average (entry 0 is 0).
  std::vector<double> standard_errors;
};

/// Builds statistics from per-subset click counts (entry 0 is ignored and
/// replaced by the pulse count).
ClickStatistics statistics_from_subset_counts(int detectors, std::span<const std::uint64_t> subset_counts,
                                              std::uint64_t pulses);

/// Monte Carlo pulse train: each photon independently reaches detector i with
/// probability eta_i or is lost. Output depends only on (seed, pulses);
/// `workers` (0 = hardware concurrency) changes wall time only.
ClickStatistics simulate_pulses(const DetectorSetup& setup, const PhotonSource& source, std::uint64_t pulses,
                                std::uint64_t seed, unsigned workers = 0);

/// Exact standard error of each simulated fold average for a given pulse
/// count, from the model's pairwise-subset click probabilities.
std::vector<double> model_standard_errors(const DetectorSetup& setup, const PhotonSource& source,
                                          std::uint64_t pulses);

inline constexpr std::uint64_t kSimulationChunk = 1U << 16U;

}  // namespace hbtcal
