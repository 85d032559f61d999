// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace hbtcal {

/// Counter-based generator: output k of stream (seed, stream) is a fixed
/// function of (seed, stream, k), so chunked simulations reproduce exactly
/// regardless of how chunks are scheduled. The mixing function is SplitMix64.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(mix(seed ^ mix(stream + 0x632BE59BD9B4E019ULL))) {}

  constexpr std::uint64_t next() noexcept {
    ++counter_;
    return mix(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() noexcept { return static_cast<double>(next() >> 11U) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  constexpr double uniform_open_zero() noexcept { return 1.0 - uniform(); }

  [[nodiscard]] constexpr std::uint64_t draws() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31U);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace hbtcal
