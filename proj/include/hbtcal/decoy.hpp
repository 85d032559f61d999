// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "hbtcal/bounds.hpp"

namespace hbtcal {

struct ProtocolParams {
  double q = 0.8;        // signal-choice probability
  double q_prime = 0.1;  // decoy-choice probability
  double Y0 = 1e-8;      // zero-photon yield
  double e0 = 0.5;       // error rate of zero-photon events
  double channel_error = 0.01;

  void validate() const;
};

/// Detection probability and error product for signal and decoy pulses,
/// conditioned on the chosen intensity. The error products QE are primary.
struct ChannelObservations {
  double Q = 0.0;
  double QE = 0.0;
  double Q_prime = 0.0;
  double QE_prime = 0.0;

  [[nodiscard]] double E() const noexcept { return Q > 0.0 ? QE / Q : 0.0; }
  [[nodiscard]] double E_prime() const noexcept { return Q_prime > 0.0 ? QE_prime / Q_prime : 0.0; }
};

/// Q = 1 - exp(-mu tau) + Y0, QE = e_c (1 - exp(-mu tau)) + Y0 / 2.
ChannelObservations channel_observations(double mu, double mu_prime, double tau, double Y0,
                                         double channel_error = 0.01);

/// Photon-number bounds fed to the decoy formulas: entries 0..D-1 and the
/// tail p_{>=D} at index D.
struct SourceBounds {
  int detectors = 0;
  std::vector<double> lower;
  std::vector<double> upper;
};

/// Clamped bounds from a bounds computation.
SourceBounds source_bounds(const BoundsResult& bounds);

/// Degenerate bounds p^L = p^U = e^{-mu} mu^n / n!, tail = sum_{n>=D} p_n.
SourceBounds exact_poisson_bounds(double mu, int detectors);

struct YieldBound {
  double value = 0.0;  // clamped to [0, 1]
  double raw = 0.0;
  /// Ratio chain p^L_n/p'^U_n >= p^L_2/p'^U_2 >= p^L_1/p'^U_1 for 2 <= n <= D-1.
  bool ratio_chain = false;
};

/// Yield bound from exact probabilities p_0..p_2 and p'_0..p'_2.
YieldBound y1_lower_poisson(const ProtocolParams& params, const ChannelObservations& obs,
                            const std::vector<double>& p, const std::vector<double>& p_prime);
/// Same with Poissonian p and p'; requires 1 > mu > mu' > 0.
YieldBound y1_lower_poisson(const ProtocolParams& params, const ChannelObservations& obs, double mu,
                            double mu_prime);

/// Bound valid when the ratio chain holds only up to n = D-1 (D >= 3).
YieldBound y1_lower_calibrated(const ProtocolParams& params, const ChannelObservations& obs,
                               const SourceBounds& signal, const SourceBounds& decoy);

/// Bound from the decoy gain alone, any D >= 2.
YieldBound y1_lower_D2(const ProtocolParams& params, const ChannelObservations& obs, const SourceBounds& decoy);

/// True when the calibrated ratio chain holds for these bounds.
bool ratio_chain_holds(const SourceBounds& signal, const SourceBounds& decoy);

struct ErrorBound {
  double value = 0.0;  // clamped to [0, 1/2]
  double raw = 0.0;
};

/// e_1^U = (Q'E'/q' - p'_0 e0 Y0) / (p'_1 Y_1^L), with Q' and Q'E' conditional
/// on the decoy intensity. Requires Y1L > 0.
ErrorBound e1_upper(const ProtocolParams& params, const ChannelObservations& obs, double p0_prime_lower,
                    double p1_prime_lower, double Y1L);

struct KeyRate {
  double value = 0.0;  // max(raw, 0)
  double raw = 0.0;
};

/// R = (q p_1^L + q' p'^L_1) Y_1^L (1 - H(e_1^U)) - (qQ + q'Q') H((qQE + q'Q'E')/(qQ + q'Q')).
KeyRate key_rate(const ProtocolParams& params, const ChannelObservations& obs, double p1_lower,
                 double p1_prime_lower, double Y1L, double e1U);

enum class KeyMode { poisson_known, D4, D3, D2 };

const char* to_string(KeyMode mode) noexcept;
KeyMode parse_key_mode(const std::string& name);
int detectors_of(KeyMode mode) noexcept;

struct CalibrationConfig {
  double eta_total = 0.1;           // eta = eta_total / D
  double relative_ambiguity = 0.01;  // eta (1 +- relative)
  bool worst_case = true;           // false: nominal-eta bounds
  int grid_points = 21;
};

/// Clamped calibration bounds for a Poissonian source of mean mu observed
/// with D uniform detectors.
SourceBounds calibrated_bounds(double mu, int detectors, const CalibrationConfig& config);

struct KeyRatePoint {
  KeyMode mode = KeyMode::poisson_known;
  double tau = 0.0;
  double mu = 0.0;
  double mu_prime = 0.0;
  double Y1L = 0.0;
  double e1U = 0.0;
  double e1U_raw = 0.0;
  double p1_lower = 0.0;
  double p1_prime_lower = 0.0;
  double R = 0.0;
  double R_raw = 0.0;
  bool no_key = false;
  /// Calibrated D >= 3 modes whose ratio chain failed use the decoy-only bound.
  bool downgraded = false;
};

/// Thread-safe memo of calibrated_bounds for one configuration, keyed by
/// (D, mu rounded to 1e-9).
class CalibrationCache {
 public:
  explicit CalibrationCache(CalibrationConfig config) : config_(config) {}

  [[nodiscard]] const CalibrationConfig& config() const noexcept { return config_; }
  SourceBounds bounds(double mu, int detectors);

 private:
  CalibrationConfig config_;
  std::mutex mutex_;
  std::map<std::pair<int, long long>, SourceBounds> entries_;
};

/// Key rate at one (mu, tau) with mu' = mu / 10. A cache, when given,
/// supplies the calibration and overrides `config`.
KeyRatePoint evaluate_key_rate(KeyMode mode, double mu, double tau, const ProtocolParams& params,
                               const CalibrationConfig& config, CalibrationCache* cache = nullptr);

/// Grid mu in [0.01, 0.99] step 0.01, refined at step 0.001 around the best;
/// ties go to the smaller mu. No positive rate: lowest mu, R = 0, no_key.
KeyRatePoint optimize_mu(KeyMode mode, double tau, const ProtocolParams& params, const CalibrationConfig& config,
                         CalibrationCache* cache = nullptr);

/// One optimized point per (mode, tau), modes outermost, in input order.
std::vector<KeyRatePoint> keyrate_sweep(const std::vector<KeyMode>& modes, const std::vector<double>& taus,
                                        const ProtocolParams& params, const CalibrationConfig& config,
                                        unsigned workers = 0);

}  // namespace hbtcal
