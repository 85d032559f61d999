// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#include "hbtcal/photon_source.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hbtcal/error.hpp"
#include "hbtcal/rng.hpp"
#include "wide.hpp"

namespace hbtcal {

namespace {

constexpr double kNormalizationTolerance = 1e-12;

std::vector<double> prefix_sums(std::span<const double> values) {
  std::vector<double> out(values.size());
  std::partial_sum(values.begin(), values.end(), out.begin());
  return out;
}

void check_normalized(std::span<const double> values, const char* what) {
  double sum = 0.0;
  for (double v : values) {
    require(std::isfinite(v) && v >= 0.0, ErrorCode::invalid_argument,
            std::string(what) + " entries must be finite and nonnegative");
    sum += v;
  }
  require(std::abs(sum - 1.0) <= kNormalizationTolerance, ErrorCode::invalid_argument,
          std::string(what) + " must sum to 1 within 1e-12");
}

double falling_factorial(double n, int r) {
  double out = 1.0;
  for (int k = 0; k < r; ++k) out *= n - k;
  return out;
}

// Inversion sampling of Poisson(mean) for mean < 10.
std::uint64_t poisson_inversion(double mean, CounterRng& rng) {
  const double u = rng.uniform();
  double term = std::exp(-mean);
  double cdf = term;
  std::uint64_t k = 0;
  // The k bound only matters when cdf saturates just below u at 1 - 2^-53.
  while (u >= cdf && k < 1000) {
    ++k;
    term *= mean / static_cast<double>(k);
    cdf += term;
  }
  return k;
}

}  // namespace

PhotonSource PhotonSource::poissonian(double mean) {
  require(std::isfinite(mean) && mean > 0.0, ErrorCode::invalid_argument, "poissonian mean must be > 0");
  PhotonSource s;
  s.kind_ = Kind::poissonian;
  s.mean_ = mean;
  return s;
}

PhotonSource PhotonSource::thermal(double mean) {
  require(std::isfinite(mean) && mean > 0.0, ErrorCode::invalid_argument, "thermal mean must be > 0");
  PhotonSource s;
  s.kind_ = Kind::thermal;
  s.mean_ = mean;
  return s;
}

PhotonSource PhotonSource::finite(std::vector<double> probabilities) {
  require(!probabilities.empty(), ErrorCode::invalid_argument, "finite distribution is empty");
  check_normalized(probabilities, "finite distribution");
  PhotonSource s;
  s.kind_ = Kind::finite;
  s.cumulative_ = prefix_sums(probabilities);
  s.probabilities_ = std::move(probabilities);
  return s;
}

PhotonSource PhotonSource::fock(int photons) {
  require(photons >= 0, ErrorCode::invalid_argument, "Fock photon number must be >= 0");
  std::vector<double> p(static_cast<std::size_t>(photons) + 1, 0.0);
  p.back() = 1.0;
  return finite(std::move(p));
}

PhotonSource PhotonSource::mixture(std::vector<double> weights, std::vector<PhotonSource> components) {
  require(!weights.empty() && weights.size() == components.size(), ErrorCode::invalid_argument,
          "mixture needs one weight per component");
  check_normalized(weights, "mixture weights");
  PhotonSource s;
  s.kind_ = Kind::mixture;
  s.cumulative_ = prefix_sums(weights);
  s.weights_ = std::move(weights);
  s.components_ = std::move(components);
  return s;
}

std::string PhotonSource::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::poissonian: os << "poissonian(mean=" << mean_ << ")"; break;
    case Kind::thermal: os << "thermal(mean=" << mean_ << ")"; break;
    case Kind::finite: os << "finite(N=" << probabilities_.size() - 1 << ")"; break;
    case Kind::mixture: os << "mixture(" << components_.size() << " components)"; break;
  }
  return os.str();
}

double PhotonSource::probability(int n) const {
  require(n >= 0, ErrorCode::invalid_argument, "photon number must be >= 0");
  switch (kind_) {
    case Kind::poissonian:
      return std::exp(-mean_ + n * std::log(mean_) - std::lgamma(n + 1.0));
    case Kind::thermal:
      return std::exp(n * std::log(mean_ / (1.0 + mean_)) - std::log1p(mean_));
    case Kind::finite:
      return static_cast<std::size_t>(n) < probabilities_.size() ? probabilities_[static_cast<std::size_t>(n)] : 0.0;
    case Kind::mixture: {
      double p = 0.0;
      for (std::size_t k = 0; k < components_.size(); ++k) p += weights_[k] * components_[k].probability(n);
      return p;
    }
  }
  return 0.0;
}

double PhotonSource::falling_moment(int r) const {
  require(r >= 0, ErrorCode::invalid_argument, "moment order must be >= 0");
  switch (kind_) {
    case Kind::poissonian: return std::pow(mean_, r);
    case Kind::thermal: return std::tgamma(r + 1.0) * std::pow(mean_, r);
    case Kind::finite: {
      double m = 0.0;
      for (std::size_t n = 0; n < probabilities_.size(); ++n) {
        m += probabilities_[n] * falling_factorial(static_cast<double>(n), r);
      }
      return m;
    }
    case Kind::mixture: {
      double m = 0.0;
      for (std::size_t k = 0; k < components_.size(); ++k) m += weights_[k] * components_[k].falling_moment(r);
      return m;
    }
  }
  return 0.0;
}

double PhotonSource::mean() const { return falling_moment(1); }

double PhotonSource::pgf(double x) const {
  return static_cast<double>(detail::pgf_of_loss(*this, detail::wide(1) - detail::wide(x)));
}

int PhotonSource::max_photons() const {
  switch (kind_) {
    case Kind::poissonian:
    case Kind::thermal: return -1;
    case Kind::finite: {
      int n = static_cast<int>(probabilities_.size()) - 1;
      while (n > 0 && probabilities_[static_cast<std::size_t>(n)] == 0.0) --n;
      return n;
    }
    case Kind::mixture: {
      int best = 0;
      for (std::size_t k = 0; k < components_.size(); ++k) {
        if (weights_[k] == 0.0) continue;
        const int m = components_[k].max_photons();
        if (m < 0) return -1;
        best = std::max(best, m);
      }
      return best;
    }
  }
  return -1;
}

std::uint64_t PhotonSource::sample(CounterRng& rng) const {
  std::uint64_t n = 0;
  switch (kind_) {
    case Kind::poissonian: {
      // Sum of independent Poisson pieces, each with mean below 10.
      const auto pieces = static_cast<std::uint64_t>(std::ceil(mean_ / 9.0));
      require(static_cast<double>(pieces) * 9.0 < 10.0 * static_cast<double>(kMaxSampledPhotons),
              ErrorCode::sampling_overflow, "poissonian mean too large to sample");
      const double piece_mean = mean_ / static_cast<double>(pieces);
      for (std::uint64_t k = 0; k < pieces; ++k) n += poisson_inversion(piece_mean, rng);
      break;
    }
    case Kind::thermal: {
      const double ratio = mean_ / (1.0 + mean_);
      const double draw = std::floor(std::log(rng.uniform_open_zero()) / std::log(ratio));
      require(draw <= static_cast<double>(kMaxSampledPhotons), ErrorCode::sampling_overflow,
              "thermal photon draw exceeds cap");
      n = static_cast<std::uint64_t>(draw);
      break;
    }
    case Kind::finite: {
      const double u = rng.uniform() * cumulative_.back();
      const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      n = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                                              static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
      break;
    }
    case Kind::mixture: {
      const double u = rng.uniform() * cumulative_.back();
      const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      const auto k = std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                              static_cast<std::ptrdiff_t>(cumulative_.size()) - 1);
      n = components_[static_cast<std::size_t>(k)].sample(rng);
      break;
    }
  }
  require(n <= kMaxSampledPhotons, ErrorCode::sampling_overflow, "photon draw exceeds cap of 10^6");
  return n;
}

std::vector<double> truncated_distribution(const PhotonSource& source, int n_max) {
  std::vector<double> p(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) p[static_cast<std::size_t>(n)] = source.probability(n);
  return p;
}

namespace detail {

wide pgf_of_loss(const PhotonSource& source, wide loss) {
  switch (source.kind()) {
    case PhotonSource::Kind::poissonian:
      return expq(-wide(source.parameter()) * loss);
    case PhotonSource::Kind::thermal:
      return wide(1) / (wide(1) + wide(source.parameter()) * loss);
    case PhotonSource::Kind::finite: {
      const auto p = source.probabilities();
      const wide x = wide(1) - loss;
      // Sparse vectors (Fock states) are common; skip zero terms via powers.
      std::size_t nonzero = 0;
      for (double v : p) nonzero += v != 0.0 ? 1U : 0U;
      if (nonzero * 16 < p.size()) {
        wide sum = 0;
        for (std::size_t n = 0; n < p.size(); ++n) {
          if (p[n] != 0.0) sum += wide(p[n]) * wide_pow(x, n);
        }
        return sum;
      }
      wide acc = 0;
      for (std::size_t n = p.size(); n-- > 0;) acc = acc * x + wide(p[n]);
      return acc;
    }
    case PhotonSource::Kind::mixture: {
      wide sum = 0;
      const auto w = source.weights();
      const auto c = source.components();
      for (std::size_t k = 0; k < c.size(); ++k) sum += wide(w[k]) * pgf_of_loss(c[k], loss);
      return sum;
    }
  }
  return 0;
}

}  // namespace detail

}  // namespace hbtcal
