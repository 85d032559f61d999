// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#include "hbtcal/coincidence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "hbtcal/error.hpp"
#include "wide.hpp"

namespace hbtcal {

using detail::wide;

DetectorSetup::DetectorSetup(std::vector<double> efficiencies) : eta_(std::move(efficiencies)) {
  require(!eta_.empty() && eta_.size() <= static_cast<std::size_t>(kMaxDetectors), ErrorCode::invalid_argument,
          "detector count must be in 1.." + std::to_string(kMaxDetectors));
  for (double e : eta_) require(std::isfinite(e), ErrorCode::invalid_argument, "efficiency is not finite");
}

DetectorSetup DetectorSetup::uniform(int detectors, double eta) {
  require(detectors >= 1 && detectors <= kMaxDetectors, ErrorCode::invalid_argument,
          "detector count must be in 1.." + std::to_string(kMaxDetectors));
  return DetectorSetup(std::vector<double>(static_cast<std::size_t>(detectors), eta));
}

bool DetectorSetup::is_uniform() const noexcept {
  return std::all_of(eta_.begin(), eta_.end(), [&](double e) { return e == eta_.front(); });
}

double DetectorSetup::mean_efficiency() const noexcept {
  if (is_uniform()) return eta_.front();
  return std::accumulate(eta_.begin(), eta_.end(), 0.0) / static_cast<double>(eta_.size());
}

double DetectorSetup::mask_sum(std::uint32_t mask) const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < eta_.size(); ++i) {
    if (mask & (1U << i)) s += eta_[i];
  }
  return s;
}

ValidationReport validate_setup(const DetectorSetup& setup) {
  ValidationReport report;
  const auto eta = setup.efficiencies();
  const int d = setup.detectors();
  std::ostringstream os;
  os.precision(17);

  for (int i = 0; i < d; ++i) {
    const double e = eta[static_cast<std::size_t>(i)];
    if (!(e > 0.0 && e < 1.0)) {
      os.str("");
      os << "efficiency-range: eta_" << i + 1 << " = " << e << " is outside (0, 1)";
      report.violations.push_back(os.str());
    }
  }
  const double total = std::accumulate(eta.begin(), eta.end(), 0.0);
  if (!(total < 1.0)) {
    os.str("");
    os << "efficiency-sum: sum of efficiencies " << total << " is not below 1";
    report.violations.push_back(os.str());
  }

  // Any j-subset must have a smaller total than any (j+1)-subset; the
  // binding pair is the j largest against the j+1 smallest.
  std::vector<double> sorted(eta.begin(), eta.end());
  std::sort(sorted.begin(), sorted.end());
  for (int j = 1; j < d; ++j) {
    const double largest = std::accumulate(sorted.end() - j, sorted.end(), 0.0);
    const double smallest = std::accumulate(sorted.begin(), sorted.begin() + j + 1, 0.0);
    if (!(largest < smallest)) {
      os.str("");
      os << "efficiency-ordering: sum of the " << j << " largest efficiencies (" << largest
         << ") is not below the sum of the " << j + 1 << " smallest (" << smallest << ")";
      report.violations.push_back(os.str());
    }
  }
  return report;
}

void require_valid(const DetectorSetup& setup) {
  const auto report = validate_setup(setup);
  if (report.valid()) return;
  std::string msg = "invalid detector setup:";
  for (const auto& v : report.violations) msg += " [" + v + "]";
  fail(ErrorCode::invalid_argument, msg);
}

CoincidenceVector::CoincidenceVector(std::vector<double> entries) : entries_(std::move(entries)) {
  require(entries_.size() >= 2 && entries_.size() <= static_cast<std::size_t>(kMaxDetectors) + 1,
          ErrorCode::invalid_argument, "coincidence vector must have D+1 entries with 1 <= D <= 24");
  require(entries_[0] == 1.0, ErrorCode::invalid_argument, "coincidence vector entry 0 must be 1");
  for (double c : entries_) {
    require(std::isfinite(c) && c >= 0.0 && c <= 1.0, ErrorCode::invalid_argument,
            "coincidence entries must lie in [0, 1]");
  }
}

bool CoincidenceVector::nonincreasing() const noexcept {
  return std::is_sorted(entries_.rbegin(), entries_.rend());
}

namespace detail {

std::vector<wide> mask_sums(const DetectorSetup& setup) {
  const int d = setup.detectors();
  const std::size_t count = std::size_t{1} << d;
  std::vector<wide> sums(count, 0);
  const auto eta = setup.efficiencies();
  for (std::size_t mask = 1; mask < count; ++mask) {
    const int low = std::countr_zero(mask);
    sums[mask] = sums[mask & (mask - 1)] + wide(eta[static_cast<std::size_t>(low)]);
  }
  return sums;
}

std::vector<wide> fold_average(int detectors, std::span<const wide> g) {
  std::vector<wide> by_size(static_cast<std::size_t>(detectors) + 1, 0);
  for (std::size_t mask = 0; mask < g.size(); ++mask) {
    by_size[static_cast<std::size_t>(std::popcount(mask))] += g[mask];
  }
  std::vector<wide> out(static_cast<std::size_t>(detectors) + 1, 0);
  for (int r = 0; r <= detectors; ++r) {
    wide acc = 0;
    for (int j = 0; j <= r; ++j) {
      const Rational w = omega(detectors, r, j);
      const wide term = wide(w.num) / wide(w.den) * by_size[static_cast<std::size_t>(j)];
      acc += (j % 2 == 0) ? term : -term;
    }
    out[static_cast<std::size_t>(r)] = acc;
  }
  return out;
}

wide inclusion_exclusion(std::uint32_t mask, std::span<const wide> g) {
  wide acc = 0;
  // Enumerate submasks of mask, including the empty set.
  std::uint32_t sub = mask;
  while (true) {
    const wide v = g[sub];
    acc += (std::popcount(sub) % 2 == 0) ? v : -v;
    if (sub == 0) break;
    sub = (sub - 1) & mask;
  }
  return acc;
}

}  // namespace detail

namespace {

void check_subset(const DetectorSetup& setup, const SubsetIndex& subset) {
  for (int i : subset.members()) {
    require(i >= 1 && i <= setup.detectors(), ErrorCode::invalid_argument,
            "subset member " + std::to_string(i) + " is not a detector of this setup");
  }
}

std::vector<wide> power_table(const DetectorSetup& setup, std::uint64_t n) {
  auto table = detail::mask_sums(setup);
  for (auto& v : table) v = detail::wide_pow(wide(1) - v, n);
  return table;
}

}  // namespace

double subset_coincidence(const DetectorSetup& setup, int n, const SubsetIndex& subset) {
  require(n >= 0, ErrorCode::invalid_argument, "photon number must be >= 0");
  check_subset(setup, subset);
  if (static_cast<int>(subset.size()) > n) return 0.0;
  const auto table = power_table(setup, static_cast<std::uint64_t>(n));
  return static_cast<double>(detail::inclusion_exclusion(subset.mask(), table));
}

std::vector<double> coincidence_column(const DetectorSetup& setup, int n) {
  require(n >= 0, ErrorCode::invalid_argument, "photon number must be >= 0");
  const int d = setup.detectors();
  const auto folded = detail::fold_average(d, power_table(setup, static_cast<std::uint64_t>(n)));
  std::vector<double> column(static_cast<std::size_t>(d) + 1, 0.0);
  for (int r = 0; r <= std::min(n, d); ++r) {
    column[static_cast<std::size_t>(r)] = static_cast<double>(folded[static_cast<std::size_t>(r)]);
  }
  column[0] = 1.0;
  return column;
}

double c_nr(const DetectorSetup& setup, int n, int r) {
  require(r >= 0 && r <= setup.detectors(), ErrorCode::invalid_argument, "fold r outside 0..D");
  require(n >= 0, ErrorCode::invalid_argument, "photon number must be >= 0");
  if (r > n) return 0.0;
  return coincidence_column(setup, n)[static_cast<std::size_t>(r)];
}

double diagonal_coincidence(const DetectorSetup& setup, int r) {
  require(r >= 0 && r <= setup.detectors(), ErrorCode::invalid_argument, "fold r outside 0..D");
  if (r == 0) return 1.0;
  return std::tgamma(r + 1.0) * elementary_average(setup, r);
}

CoincidenceVector c_obs_analytic(const DetectorSetup& setup, const PhotonSource& source) {
  require_valid(setup);
  const int d = setup.detectors();
  auto g = detail::mask_sums(setup);
  for (auto& v : g) v = detail::pgf_of_loss(source, v);
  const auto folded = detail::fold_average(d, g);
  const int max_n = source.max_photons();
  std::vector<double> entries(static_cast<std::size_t>(d) + 1, 0.0);
  entries[0] = 1.0;
  for (int r = 1; r <= d; ++r) {
    if (max_n >= 0 && r > max_n) continue;
    entries[static_cast<std::size_t>(r)] =
        std::clamp(static_cast<double>(folded[static_cast<std::size_t>(r)]), 0.0, 1.0);
  }
  return CoincidenceVector(std::move(entries));
}

std::vector<double> coincidences_of_weights(const DetectorSetup& setup, std::span<const double> weights) {
  const int d = setup.detectors();
  const auto sums = detail::mask_sums(setup);
  std::vector<wide> g(sums.size(), 0);
  for (std::size_t mask = 0; mask < sums.size(); ++mask) {
    const wide x = wide(1) - sums[mask];
    wide acc = 0;
    for (std::size_t n = weights.size(); n-- > 0;) acc = acc * x + wide(weights[n]);
    g[mask] = acc;
  }
  const auto folded = detail::fold_average(d, g);
  std::vector<double> out(static_cast<std::size_t>(d) + 1, 0.0);
  for (int r = 0; r <= d; ++r) {
    if (static_cast<std::size_t>(r) >= weights.size()) continue;
    out[static_cast<std::size_t>(r)] = static_cast<double>(folded[static_cast<std::size_t>(r)]);
  }
  return out;
}

double subset_click_probability(const DetectorSetup& setup, const PhotonSource& source, std::uint32_t mask) {
  require(mask < (1U << setup.detectors()), ErrorCode::invalid_argument, "mask names detectors outside the setup");
  auto g = detail::mask_sums(setup);
  for (auto& v : g) v = detail::pgf_of_loss(source, v);
  return std::clamp(static_cast<double>(detail::inclusion_exclusion(mask, g)), 0.0, 1.0);
}

}  // namespace hbtcal
