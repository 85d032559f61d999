// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hbtcal {

class CounterRng;

/// Photon-number distribution of a pulsed source.
///
/// Four kinds are supported: Poissonian and thermal (parametrized by the mean
/// photon number), an explicit finite distribution p_0..p_N, and a weighted
/// mixture of other sources. The probability generating function
/// G(x) = sum_n p_n x^n is available in closed form for every kind, which is
/// what the coincidence model evaluates.
class PhotonSource {
 public:
  enum class Kind { poissonian, thermal, finite, mixture };

  static PhotonSource poissonian(double mean);
  static PhotonSource thermal(double mean);
  static PhotonSource finite(std::vector<double> probabilities);
  /// Finite distribution with all weight on n photons.
  static PhotonSource fock(int photons);
  static PhotonSource vacuum() { return fock(0); }
  static PhotonSource mixture(std::vector<double> weights, std::vector<PhotonSource> components);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] std::string describe() const;

  [[nodiscard]] double probability(int n) const;
  [[nodiscard]] double mean() const;
  /// <n(n-1)...(n-r+1)>, r >= 0 (r = 0 gives 1).
  [[nodiscard]] double falling_moment(int r) const;
  [[nodiscard]] double pgf(double x) const;

  /// Largest photon number with nonzero weight, or -1 when unbounded.
  [[nodiscard]] int max_photons() const;

  /// Draws the photon number of one pulse. Throws sampling_overflow above
  /// kMaxSampledPhotons.
  [[nodiscard]] std::uint64_t sample(CounterRng& rng) const;

  // Members for finite and mixture kinds.
  [[nodiscard]] std::span<const double> probabilities() const noexcept { return probabilities_; }
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
  [[nodiscard]] std::span<const PhotonSource> components() const noexcept { return components_; }
  [[nodiscard]] double parameter() const noexcept { return mean_; }

  static constexpr std::uint64_t kMaxSampledPhotons = 1'000'000;

 private:
  PhotonSource() = default;

  Kind kind_ = Kind::finite;
  double mean_ = 0.0;
  std::vector<double> probabilities_;
  std::vector<double> cumulative_;
  std::vector<double> weights_;
  std::vector<PhotonSource> components_;
};

/// Truncated direct distribution p_0..p_{n_max}.
std::vector<double> truncated_distribution(const PhotonSource& source, int n_max);

}  // namespace hbtcal
