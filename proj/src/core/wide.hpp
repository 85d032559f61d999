// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
//
// Quad-precision helpers for the inclusion-exclusion sums. Those sums add
// O(1) terms of alternating sign to produce O(eta^r) results, so double
// arithmetic would lose ~r*log10(1/eta) digits.
#pragma once

#include <quadmath.h>

#include <cstdint>
#include <span>
#include <vector>

namespace hbtcal {
class PhotonSource;
class DetectorSetup;
}  // namespace hbtcal

namespace hbtcal::detail {

using wide = __float128;

inline wide wide_pow(wide base, std::uint64_t exponent) {
  wide result = 1;
  while (exponent != 0) {
    if (exponent & 1U) result *= base;
    base *= base;
    exponent >>= 1U;
  }
  return result;
}

/// G(1 - loss) where loss = sum of efficiencies of a detector subset.
wide pgf_of_loss(const PhotonSource& source, wide loss);

/// eta_W for every mask W in [0, 2^D).
std::vector<wide> mask_sums(const DetectorSetup& setup);

/// Given g[W] for every mask, returns for r = 0..D
///   sum_j (-1)^j omega_{r,j} sum_{|W|=j} g[W].
std::vector<wide> fold_average(int detectors, std::span<const wide> g);

/// sum_{V subset of mask} (-1)^|V| g[V].
wide inclusion_exclusion(std::uint32_t mask, std::span<const wide> g);

}  // namespace hbtcal::detail
