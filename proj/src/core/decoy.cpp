// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#include "hbtcal/decoy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "hbtcal/core_math.hpp"
#include "hbtcal/error.hpp"
#include "hbtcal/uncertainty.hpp"

namespace hbtcal {

void ProtocolParams::validate() const {
  require(q > 0.0 && q < 1.0 && q_prime > 0.0 && q_prime < 1.0 && q + q_prime <= 1.0, ErrorCode::invalid_argument,
          "need q, q' in (0, 1) with q + q' <= 1");
  require(Y0 >= 0.0 && Y0 <= 1.0, ErrorCode::invalid_argument, "Y0 must be in [0, 1]");
  require(e0 == 0.5, ErrorCode::invalid_argument, "e0 is fixed at 1/2");
  require(channel_error >= 0.0 && channel_error <= 0.5, ErrorCode::invalid_argument,
          "channel error must be in [0, 1/2]");
}

ChannelObservations channel_observations(double mu, double mu_prime, double tau, double Y0, double channel_error) {
  require(mu > mu_prime && mu_prime > 0.0, ErrorCode::invalid_argument, "need mu > mu' > 0");
  require(tau >= 0.0 && tau <= 1.0, ErrorCode::invalid_argument, "transmission must be in (0, 1]");
  require(Y0 >= 0.0 && Y0 < 1.0, ErrorCode::invalid_argument, "Y0 must be in [0, 1)");
  require(tau > 0.0 || Y0 > 0.0, ErrorCode::degenerate_channel, "no detections: tau = 0 and Y0 = 0");
  const double signal = -std::expm1(-mu * tau);
  const double decoy = -std::expm1(-mu_prime * tau);
  ChannelObservations obs;
  obs.Q = signal + Y0;
  obs.QE = channel_error * signal + 0.5 * Y0;
  obs.Q_prime = decoy + Y0;
  obs.QE_prime = channel_error * decoy + 0.5 * Y0;
  return obs;
}

SourceBounds source_bounds(const BoundsResult& bounds) {
  return SourceBounds{bounds.detectors, bounds.lower, bounds.upper};
}

namespace {

double poisson_probability(double mu, int n) { return std::exp(-mu + n * std::log(mu) - std::lgamma(n + 1.0)); }

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

SourceBounds exact_poisson_bounds(double mu, int detectors) {
  require(mu > 0.0, ErrorCode::invalid_argument, "mean photon number must be positive");
  require(detectors >= 1, ErrorCode::invalid_argument, "need D >= 1");
  SourceBounds b;
  b.detectors = detectors;
  for (int n = 0; n < detectors; ++n) b.lower.push_back(poisson_probability(mu, n));
  double tail = 0.0;
  for (int n = detectors;; ++n) {
    const double term = poisson_probability(mu, n);
    tail += term;
    if (n > mu && term < 1e-18 * tail) break;
  }
  b.lower.push_back(tail);
  b.upper = b.lower;
  return b;
}

YieldBound y1_lower_poisson(const ProtocolParams& params, const ChannelObservations& obs,
                            const std::vector<double>& p, const std::vector<double>& pp) {
  require(p.size() >= 3 && pp.size() >= 3, ErrorCode::invalid_argument, "need p_0..p_2 for both intensities");
  const double den = pp[1] * p[2] - p[1] * pp[2];
  require(den > 0.0, ErrorCode::precondition_failed, "yield bound denominator p'_1 p_2 - p_1 p'_2 is not positive");
  const double num = p[2] * obs.Q_prime - pp[2] * obs.Q - (pp[0] * p[2] - p[0] * pp[2]) * params.Y0;
  YieldBound y;
  y.raw = num / den;
  y.value = clamp01(y.raw);
  y.ratio_chain = true;
  return y;
}

YieldBound y1_lower_poisson(const ProtocolParams& params, const ChannelObservations& obs, double mu,
                            double mu_prime) {
  require(1.0 > mu && mu > mu_prime && mu_prime > 0.0, ErrorCode::precondition_failed, "need 1 > mu > mu' > 0");
  std::vector<double> p, pp;
  for (int n = 0; n < 3; ++n) {
    p.push_back(poisson_probability(mu, n));
    pp.push_back(poisson_probability(mu_prime, n));
  }
  return y1_lower_poisson(params, obs, p, pp);
}

bool ratio_chain_holds(const SourceBounds& s, const SourceBounds& d) {
  const int dets = s.detectors;
  if (dets < 3 || d.detectors != dets) return false;
  const auto& pl = s.lower;
  const auto& pu = d.upper;
  // Cross-multiplied so that vanishing decoy bounds do not divide by zero.
  if (pl[2] * pu[1] < pl[1] * pu[2]) return false;
  for (int n = 3; n < dets; ++n) {
    const auto i = static_cast<std::size_t>(n);
    if (pl[i] * pu[2] < pl[2] * pu[i]) return false;
  }
  return true;
}

YieldBound y1_lower_calibrated(const ProtocolParams& params, const ChannelObservations& obs,
                               const SourceBounds& s, const SourceBounds& d) {
  require(s.detectors >= 3 && d.detectors == s.detectors, ErrorCode::precondition_failed,
          "calibrated yield bound needs D >= 3 for both intensities");
  require(ratio_chain_holds(s, d), ErrorCode::precondition_failed, "ratio chain of the calibrated bounds fails");
  const auto& pl = s.lower;
  const auto& pu = d.upper;
  const double den = pu[1] * pl[2] - pl[1] * pu[2];
  require(den > 0.0, ErrorCode::precondition_failed, "yield bound denominator p'^U_1 p^L_2 - p^L_1 p'^U_2 is not positive");
  const double tail = pu[static_cast<std::size_t>(s.detectors)];
  const double num = pl[2] * obs.Q_prime - pu[2] * obs.Q - (pu[0] * pl[2] - pl[0] * pu[2]) * params.Y0;
  YieldBound y;
  y.raw = num / den - pl[2] * tail / den;
  y.value = clamp01(y.raw);
  y.ratio_chain = true;
  return y;
}

YieldBound y1_lower_D2(const ProtocolParams& params, const ChannelObservations& obs, const SourceBounds& d) {
  require(d.detectors >= 2, ErrorCode::precondition_failed, "decoy-only yield bound needs D >= 2");
  const double p1 = d.upper[1];
  require(p1 > 0.0, ErrorCode::precondition_failed, "p'^U_1 vanishes");
  YieldBound y;
  y.raw = (obs.Q_prime - d.upper[0] * params.Y0 - d.upper[static_cast<std::size_t>(d.detectors)]) / p1;
  y.value = clamp01(y.raw);
  return y;
}

ErrorBound e1_upper(const ProtocolParams& params, const ChannelObservations& obs, double p0_prime_lower,
                    double p1_prime_lower, double Y1L) {
  require(Y1L > 0.0 && p1_prime_lower > 0.0, ErrorCode::precondition_failed,
          "no key: the single-photon yield bound is not positive");
  ErrorBound e;
  e.raw = (obs.QE_prime - p0_prime_lower * params.e0 * params.Y0) / (p1_prime_lower * Y1L);
  e.value = std::clamp(e.raw, 0.0, 0.5);
  return e;
}

KeyRate key_rate(const ProtocolParams& params, const ChannelObservations& obs, double p1_lower,
                 double p1_prime_lower, double Y1L, double e1U) {
  const double gain = params.q * obs.Q + params.q_prime * obs.Q_prime;
  const double errors = params.q * obs.QE + params.q_prime * obs.QE_prime;
  const double leak = gain > 0.0 ? gain * binary_entropy(std::clamp(errors / gain, 0.0, 1.0)) : 0.0;
  const double single = (params.q * p1_lower + params.q_prime * p1_prime_lower) * Y1L;
  KeyRate k;
  k.raw = single * (1.0 - binary_entropy(std::clamp(e1U, 0.0, 1.0))) - leak;
  k.value = std::max(k.raw, 0.0);
  return k;
}

const char* to_string(KeyMode mode) noexcept {
  switch (mode) {
    case KeyMode::poisson_known: return "poisson-known";
    case KeyMode::D4: return "D4";
    case KeyMode::D3: return "D3";
    case KeyMode::D2: return "D2";
  }
  return "?";
}

KeyMode parse_key_mode(const std::string& name) {
  for (auto m : {KeyMode::poisson_known, KeyMode::D4, KeyMode::D3, KeyMode::D2}) {
    if (name == to_string(m)) return m;
  }
  fail(ErrorCode::invalid_argument, "unknown key-rate mode '" + name + "'");
}

int detectors_of(KeyMode mode) noexcept {
  switch (mode) {
    case KeyMode::D4: return 4;
    case KeyMode::D3: return 3;
    case KeyMode::D2: return 2;
    case KeyMode::poisson_known: break;
  }
  return 0;
}

SourceBounds calibrated_bounds(double mu, int detectors, const CalibrationConfig& config) {
  const auto setup = DetectorSetup::uniform(detectors, config.eta_total / detectors);
  const auto c_obs = c_obs_analytic(setup, PhotonSource::poissonian(mu));
  if (!config.worst_case) return source_bounds(theorem1_bounds(setup, c_obs));
  auto inputs = exact_inputs(setup, c_obs);
  inputs.eta = relative_eta_box(setup, config.relative_ambiguity);
  inputs.grid_points = config.grid_points;
  return source_bounds(worstcase_bounds(inputs).bounds);
}

SourceBounds CalibrationCache::bounds(double mu, int detectors) {
  const std::pair<int, long long> key{detectors, std::llround(mu * 1e9)};
  {
    const std::lock_guard lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  auto b = calibrated_bounds(mu, detectors, config_);
  const std::lock_guard lock(mutex_);
  return entries_.emplace(key, std::move(b)).first->second;
}

KeyRatePoint evaluate_key_rate(KeyMode mode, double mu, double tau, const ProtocolParams& params,
                               const CalibrationConfig& config, CalibrationCache* cache) {
  params.validate();
  KeyRatePoint pt;
  pt.mode = mode;
  pt.tau = tau;
  pt.mu = mu;
  pt.mu_prime = mu / 10.0;
  const auto obs = channel_observations(pt.mu, pt.mu_prime, tau, params.Y0, params.channel_error);

  YieldBound y;
  double p0_prime_lower = 0.0;
  try {
    if (mode == KeyMode::poisson_known) {
      y = y1_lower_poisson(params, obs, pt.mu, pt.mu_prime);
      pt.p1_lower = poisson_probability(pt.mu, 1);
      pt.p1_prime_lower = poisson_probability(pt.mu_prime, 1);
      p0_prime_lower = poisson_probability(pt.mu_prime, 0);
    } else {
      const int d = detectors_of(mode);
      const auto signal = cache ? cache->bounds(pt.mu, d) : calibrated_bounds(pt.mu, d, config);
      const auto decoy = cache ? cache->bounds(pt.mu_prime, d) : calibrated_bounds(pt.mu_prime, d, config);
      pt.p1_lower = signal.lower[1];
      pt.p1_prime_lower = decoy.lower[1];
      p0_prime_lower = decoy.lower[0];
      if (d >= 3 && ratio_chain_holds(signal, decoy)) {
        y = y1_lower_calibrated(params, obs, signal, decoy);
      } else {
        pt.downgraded = d >= 3;
        y = y1_lower_D2(params, obs, decoy);
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::precondition_failed) throw;
    y = YieldBound{};
  }
  pt.Y1L = y.value;

  if (pt.Y1L > 0.0 && pt.p1_prime_lower > 0.0) {
    const auto e = e1_upper(params, obs, p0_prime_lower, pt.p1_prime_lower, pt.Y1L);
    pt.e1U = e.value;
    pt.e1U_raw = e.raw;
  } else {
    pt.e1U = 0.5;
    pt.e1U_raw = std::nan("");
  }
  const auto k = key_rate(params, obs, pt.p1_lower, pt.p1_prime_lower, pt.Y1L, pt.e1U);
  pt.R = k.value;
  pt.R_raw = k.raw;
  pt.no_key = pt.R <= 0.0;
  return pt;
}

KeyRatePoint optimize_mu(KeyMode mode, double tau, const ProtocolParams& params, const CalibrationConfig& config,
                         CalibrationCache* cache) {
  require(tau > 0.0 && tau <= 1.0, ErrorCode::invalid_argument, "transmission must be in (0, 1]");
  auto at = [&](int milli) { return evaluate_key_rate(mode, milli / 1000.0, tau, params, config, cache); };

  KeyRatePoint best;
  bool have = false;
  for (int k = 10; k <= 990; k += 10) {
    auto pt = at(k);
    if (!have || pt.R_raw > best.R_raw) {
      best = pt;
      have = true;
    }
  }
  const int centre = static_cast<int>(std::lround(best.mu * 1000.0));
  for (int k = std::max(10, centre - 10); k <= std::min(990, centre + 10); ++k) {
    if (k == centre) continue;
    auto pt = at(k);
    if (pt.R_raw > best.R_raw || (pt.R_raw == best.R_raw && pt.mu < best.mu)) best = pt;
  }
  if (best.R <= 0.0) {
    best = at(10);
    best.R = 0.0;
    best.no_key = true;
  }
  return best;
}

std::vector<KeyRatePoint> keyrate_sweep(const std::vector<KeyMode>& modes, const std::vector<double>& taus,
                                        const ProtocolParams& params, const CalibrationConfig& config,
                                        unsigned workers) {
  for (double tau : taus) {
    require(tau > 0.0 && tau <= 1.0, ErrorCode::invalid_argument, "transmission must be in (0, 1]");
  }
  const std::size_t cells = modes.size() * taus.size();
  std::vector<KeyRatePoint> out(cells);
  CalibrationCache cache(config);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < cells; i = next++) {
      try {
        out[i] = optimize_mu(modes[i / taus.size()], taus[i % taus.size()], params, config, &cache);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(cells, 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace hbtcal
