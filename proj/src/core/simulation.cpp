// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#include "hbtcal/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "hbtcal/error.hpp"
#include "hbtcal/rng.hpp"

namespace hbtcal {

namespace {

std::vector<double> fold_standard_errors(int detectors, std::span<const std::uint64_t> patterns,
                                         std::uint64_t pulses) {
  std::vector<double> out(static_cast<std::size_t>(detectors) + 1, 0.0);
  if (pulses < 2) return out;
  const double n = static_cast<double>(pulses);
  for (int r = 1; r <= detectors; ++r) {
    // Per pulse the fold average is binom(k, r) / binom(D, r), k = clicks.
    const double norm = static_cast<double>(binomial(detectors, r));
    double mean = 0.0;
    for (std::size_t m = 0; m < patterns.size(); ++m) {
      mean += static_cast<double>(patterns[m]) * static_cast<double>(binomial(std::popcount(m), r)) / norm;
    }
    mean /= n;
    double ss = 0.0;
    for (std::size_t m = 0; m < patterns.size(); ++m) {
      const double x = static_cast<double>(binomial(std::popcount(m), r)) / norm - mean;
      ss += static_cast<double>(patterns[m]) * x * x;
    }
    out[static_cast<std::size_t>(r)] = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

CoincidenceVector fold_means(int detectors, std::span<const std::uint64_t> subset_counts, std::uint64_t pulses) {
  std::vector<double> entries(static_cast<std::size_t>(detectors) + 1, 0.0);
  entries[0] = 1.0;
  std::vector<std::uint64_t> per_fold(entries.size(), 0);
  for (std::size_t w = 1; w < subset_counts.size(); ++w) {
    per_fold[static_cast<std::size_t>(std::popcount(w))] += subset_counts[w];
  }
  for (int r = 1; r <= detectors; ++r) {
    entries[static_cast<std::size_t>(r)] = static_cast<double>(per_fold[static_cast<std::size_t>(r)]) /
                                           static_cast<double>(binomial(detectors, r)) /
                                           static_cast<double>(pulses);
  }
  return CoincidenceVector(std::move(entries));
}

}  // namespace

ClickStatistics statistics_from_subset_counts(int detectors, std::span<const std::uint64_t> subset_counts,
                                              std::uint64_t pulses) {
  require(detectors >= 1 && detectors <= kMaxDetectors, ErrorCode::invalid_argument, "detector count out of range");
  const std::size_t count = std::size_t{1} << detectors;
  require(subset_counts.size() == count, ErrorCode::invalid_argument, "need one click count per subset mask");
  require(pulses >= 1, ErrorCode::invalid_argument, "total pulses must be >= 1");

  ClickStatistics stats;
  stats.detectors = detectors;
  stats.pulses = pulses;
  stats.subset_counts.assign(subset_counts.begin(), subset_counts.end());
  stats.subset_counts[0] = pulses;
  for (std::size_t w = 1; w < count; ++w) {
    require(stats.subset_counts[w] <= pulses, ErrorCode::invalid_argument,
            "clicks for mask " + std::to_string(w) + " exceed total pulses");
  }

  // Exact-pattern counts by Moebius inversion over supersets.
  std::vector<std::int64_t> patterns(count);
  for (std::size_t w = 0; w < count; ++w) patterns[w] = static_cast<std::int64_t>(stats.subset_counts[w]);
  for (int bit = 0; bit < detectors; ++bit) {
    for (std::size_t w = 0; w < count; ++w) {
      if (!(w & (std::size_t{1} << bit))) patterns[w] -= patterns[w | (std::size_t{1} << bit)];
    }
  }
  stats.pattern_counts.resize(count);
  bool consistent = true;
  for (std::size_t w = 0; w < count; ++w) {
    consistent = consistent && patterns[w] >= 0;
    stats.pattern_counts[w] = static_cast<std::uint64_t>(std::max<std::int64_t>(patterns[w], 0));
  }
  stats.coincidences = fold_means(detectors, stats.subset_counts, pulses);
  if (consistent) {
    stats.standard_errors = fold_standard_errors(detectors, stats.pattern_counts, pulses);
  } else {
    // Counts not generated by one pulse train; fall back to the binomial
    // bound sqrt(c(1-c)/N) per fold.
    stats.standard_errors.assign(static_cast<std::size_t>(detectors) + 1, 0.0);
    for (int r = 1; r <= detectors; ++r) {
      const double c = stats.coincidences[r];
      stats.standard_errors[static_cast<std::size_t>(r)] = std::sqrt(c * (1.0 - c) / static_cast<double>(pulses));
    }
  }
  return stats;
}

ClickStatistics simulate_pulses(const DetectorSetup& setup, const PhotonSource& source, std::uint64_t pulses,
                                std::uint64_t seed, unsigned workers) {
  require_valid(setup);
  require(pulses >= 1, ErrorCode::invalid_argument, "pulses must be >= 1");
  const int d = setup.detectors();
  const std::size_t patterns = std::size_t{1} << d;

  std::vector<double> cumulative(static_cast<std::size_t>(d));
  double acc = 0.0;
  for (int i = 0; i < d; ++i) {
    acc += setup.efficiency(i + 1);
    cumulative[static_cast<std::size_t>(i)] = acc;
  }

  const std::uint64_t chunks = (pulses + kSimulationChunk - 1) / kSimulationChunk;
  std::vector<std::vector<std::uint64_t>> per_chunk(chunks);

  auto run_chunk = [&](std::uint64_t chunk) {
    CounterRng rng(seed, chunk);
    std::vector<std::uint64_t> hist(patterns, 0);
    const std::uint64_t begin = chunk * kSimulationChunk;
    const std::uint64_t end = std::min(pulses, begin + kSimulationChunk);
    for (std::uint64_t p = begin; p < end; ++p) {
      const std::uint64_t photons = source.sample(rng);
      std::uint32_t mask = 0;
      for (std::uint64_t k = 0; k < photons; ++k) {
        const double u = rng.uniform();
        if (u >= acc) continue;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        mask |= 1U << static_cast<unsigned>(it - cumulative.begin());
      }
      ++hist[mask];
    }
    per_chunk[chunk] = std::move(hist);
  };

  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::uint64_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) run_chunk(c);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(chunks);
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<std::uint64_t> pattern_counts(patterns, 0);
  for (const auto& hist : per_chunk) {
    for (std::size_t m = 0; m < patterns; ++m) pattern_counts[m] += hist[m];
  }
  // Subset counts are superset sums of the pattern histogram.
  std::vector<std::uint64_t> subset_counts = pattern_counts;
  for (int bit = 0; bit < d; ++bit) {
    for (std::size_t w = 0; w < patterns; ++w) {
      if (!(w & (std::size_t{1} << bit))) subset_counts[w] += subset_counts[w | (std::size_t{1} << bit)];
    }
  }
  return statistics_from_subset_counts(d, subset_counts, pulses);
}

std::vector<double> model_standard_errors(const DetectorSetup& setup, const PhotonSource& source,
                                          std::uint64_t pulses) {
  require(pulses >= 1, ErrorCode::invalid_argument, "pulses must be >= 1");
  const int d = setup.detectors();
  const std::size_t count = std::size_t{1} << d;
  std::vector<double> all_click(count);
  for (std::size_t m = 0; m < count; ++m) {
    all_click[m] = subset_click_probability(setup, source, static_cast<std::uint32_t>(m));
  }
  std::vector<double> out(static_cast<std::size_t>(d) + 1, 0.0);
  for (int r = 1; r <= d; ++r) {
    std::vector<std::uint32_t> masks;
    for (const auto& s : subsets_of_size(d, r)) masks.push_back(s.mask());
    const double b = static_cast<double>(masks.size());
    double mean = 0.0;
    double second = 0.0;
    for (auto w : masks) {
      mean += all_click[w];
      for (auto v : masks) second += all_click[w | v];
    }
    mean /= b;
    second /= b * b;
    out[static_cast<std::size_t>(r)] = std::sqrt(std::max(0.0, second - mean * mean) / static_cast<double>(pulses));
  }
  return out;
}

}  // namespace hbtcal
