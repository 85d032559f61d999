// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#include "hbtcal/core_math.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hbtcal/coincidence.hpp"
#include "hbtcal/error.hpp"

namespace hbtcal {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::numerical_conditioning: return "numerical-conditioning";
    case ErrorCode::internal_consistency: return "internal-consistency";
    case ErrorCode::unsupported_dimension: return "unsupported-dimension";
    case ErrorCode::unsupported_source: return "unsupported-source";
    case ErrorCode::precondition_failed: return "precondition-failed";
    case ErrorCode::diagnostic_unavailable: return "diagnostic-unavailable";
    case ErrorCode::degenerate_channel: return "degenerate-channel";
    case ErrorCode::sampling_overflow: return "sampling-overflow";
  }
  return "unknown";
}

Rational make_rational(std::int64_t num, std::int64_t den) {
  require(den != 0, ErrorCode::invalid_argument, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n - k + i) is divisible by i at every step.
    result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

SubsetIndex::SubsetIndex(std::vector<int> members) : members_(std::move(members)) {
  for (std::size_t k = 0; k < members_.size(); ++k) {
    require(members_[k] >= 1 && members_[k] <= kMaxDetectors, ErrorCode::invalid_argument,
            "detector index out of range in subset");
    require(k == 0 || members_[k - 1] < members_[k], ErrorCode::invalid_argument,
            "subset members must be strictly increasing");
  }
}

SubsetIndex SubsetIndex::from_mask(std::uint32_t mask) {
  require(mask < (1U << kMaxDetectors), ErrorCode::invalid_argument, "subset mask exceeds detector cap");
  std::vector<int> members;
  for (int bit = 0; bit < kMaxDetectors; ++bit) {
    if (mask & (1U << bit)) members.push_back(bit + 1);
  }
  return SubsetIndex(std::move(members));
}

std::uint32_t SubsetIndex::mask() const noexcept {
  std::uint32_t m = 0;
  for (int i : members_) m |= 1U << (i - 1);
  return m;
}

std::vector<SubsetIndex> subsets_of_size(int detectors, int j) {
  require(detectors >= 0 && detectors <= kMaxDetectors, ErrorCode::invalid_argument,
          "detector count outside 0.." + std::to_string(kMaxDetectors));
  require(j >= 0 && j <= detectors, ErrorCode::invalid_argument, "subset size exceeds detector count");

  std::vector<SubsetIndex> out;
  out.reserve(binomial(detectors, j));
  std::vector<int> current(static_cast<std::size_t>(j));
  std::iota(current.begin(), current.end(), 1);
  while (true) {
    out.emplace_back(current);
    // Advance to the next combination in lexicographic order.
    int pos = j - 1;
    while (pos >= 0 && current[static_cast<std::size_t>(pos)] == detectors - j + pos + 1) --pos;
    if (pos < 0) break;
    ++current[static_cast<std::size_t>(pos)];
    for (int k = pos + 1; k < j; ++k) {
      current[static_cast<std::size_t>(k)] = current[static_cast<std::size_t>(k - 1)] + 1;
    }
  }
  return out;
}

Rational omega(int detectors, int r, int j) {
  require(detectors >= 0 && detectors <= kMaxDetectors, ErrorCode::invalid_argument,
          "detector count out of range");
  require(r >= 0 && r <= detectors && j >= 0 && j <= detectors, ErrorCode::invalid_argument,
          "omega index out of range");
  if (r < j) return {0, 1};
  return make_rational(static_cast<std::int64_t>(binomial(detectors - j, r - j)),
                       static_cast<std::int64_t>(binomial(detectors, r)));
}

namespace {

// Elementary symmetric polynomials e_0..e_D of the efficiencies.
std::vector<double> elementary_symmetric(std::span<const double> eta) {
  std::vector<double> e(eta.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    for (std::size_t k = i + 1; k > 0; --k) e[k] += e[k - 1] * eta[i];
  }
  return e;
}

}  // namespace

double elementary_average(const DetectorSetup& setup, int j) {
  const int d = setup.detectors();
  require(j >= 1 && j <= d, ErrorCode::invalid_argument, "elementary_average index outside 1..D");
  // Uniform efficiencies give eta^j; take it directly so xi vanishes exactly.
  if (setup.is_uniform()) return std::pow(setup.efficiency(1), j);
  const auto e = elementary_symmetric(setup.efficiencies());
  return e[static_cast<std::size_t>(j)] / static_cast<double>(binomial(d, j));
}

double xi(const DetectorSetup& setup, int i, int j) {
  const int d = setup.detectors();
  require(j >= 1 && j < i && i <= d, ErrorCode::invalid_argument, "xi requires 1 <= j < i <= D");
  if (setup.is_uniform()) return 0.0;
  const double eta = setup.mean_efficiency();
  return elementary_average(setup, i) / (elementary_average(setup, j) * std::pow(eta, i - j)) - 1.0;
}

double binary_entropy(double x) {
  require(x >= 0.0 && x <= 1.0, ErrorCode::invalid_argument, "binary_entropy argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

}  // namespace hbtcal
