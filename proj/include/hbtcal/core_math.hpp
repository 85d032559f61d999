// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace hbtcal {

class DetectorSetup;

/// Hard cap on the detector count; subset enumeration is 2^D.
inline constexpr int kMaxDetectors = 24;

/// Exact ratio of two nonnegative 64-bit integers, kept in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  [[nodiscard]] double to_double() const noexcept {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  friend bool operator==(const Rational&, const Rational&) = default;
};

Rational make_rational(std::int64_t num, std::int64_t den);

/// binomial(n, k), exact. Zero when k > n.
std::uint64_t binomial(int n, int k);

/// A set of detectors, 1-based, strictly increasing.
class SubsetIndex {
 public:
  SubsetIndex() = default;
  explicit SubsetIndex(std::vector<int> members);

  static SubsetIndex from_mask(std::uint32_t mask);

  [[nodiscard]] const std::vector<int>& members() const noexcept { return members_; }
  [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
  [[nodiscard]] bool empty() const noexcept { return members_.empty(); }
  /// Detector i maps to bit i-1.
  [[nodiscard]] std::uint32_t mask() const noexcept;

  friend bool operator==(const SubsetIndex&, const SubsetIndex&) = default;

 private:
  std::vector<int> members_;
};

/// All subsets of {1..D} of size j in lexicographic order.
std::vector<SubsetIndex> subsets_of_size(int detectors, int j);

/// omega_{r,j} = binom(D-j, r-j) / binom(D, r), zero for r < j.
Rational omega(int detectors, int r, int j);

/// Mean over size-j subsets of the product of their efficiencies.
double elementary_average(const DetectorSetup& setup, int j);

/// xi_{i,j} = s_i / (s_j eta^(i-j)) - 1, with s_1 taken as the mean efficiency.
double xi(const DetectorSetup& setup, int i, int j);

/// H(x) in bits.
double binary_entropy(double x);

}  // namespace hbtcal
