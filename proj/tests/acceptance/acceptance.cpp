// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.
#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hbtcal/bounds.hpp"
#include "hbtcal/decoy.hpp"
#include "hbtcal/diagnostics.hpp"
#include "hbtcal/simulation.hpp"
#include "hbtcal/uncertainty.hpp"
#include "oracles.hpp"

using namespace hbtcal;
using ld = long double;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // 0: no runtime limit
  std::function<Outcome()> body;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

DetectorSetup random_valid_setup(std::mt19937_64& rng, int d, double lo, double hi, double spread) {
  for (;;) {
    DetectorSetup s(oracle::random_efficiencies(rng, d, lo, hi, spread));
    if (validate_setup(s).valid()) return s;
  }
}

std::vector<double> as_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

// ---------------------------------------------------------------------------

Outcome sandwich() {
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<int> dets(2, 5), photons(0, 10);
  int violations = 0;
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const int d = dets(rng);
    const auto setup = random_valid_setup(rng, d, 0.005, 0.18, 0.3);
    const auto p = oracle::random_distribution(rng, photons(rng));
    const auto b = theorem1_bounds(setup, c_obs_analytic(setup, PhotonSource::finite(p)));
    double tail = 0.0;
    for (std::size_t n = static_cast<std::size_t>(d); n < p.size(); ++n) tail += p[n];
    for (int n = 0; n <= d; ++n) {
      const auto i = static_cast<std::size_t>(n);
      const double truth = n < d ? (i < p.size() ? p[i] : 0.0) : tail;
      const double excess = std::max(b.lower_raw[i] - truth, truth - b.upper_raw[i]);
      worst = std::max(worst, excess);
      if (excess > 1e-12) ++violations;
    }
  }
  return {violations == 0, fmt("500 cases, %d violations, max excess %.3g", violations, worst)};
}

Outcome closed_form_equivalence() {
  std::mt19937_64 rng(20260102);
  std::uniform_int_distribution<int> dets(2, 4), photons(0, 10);
  double worst = 0.0;
  int over = 0;
  for (int t = 0; t < 200; ++t) {
    const int d = dets(rng);
    const auto setup = random_valid_setup(rng, d, 0.005, 0.2, 0.3);
    const auto c = c_obs_analytic(setup, PhotonSource::finite(oracle::random_distribution(rng, photons(rng))));
    const auto a = theorem1_bounds(setup, c);
    const auto b = closedform_bounds(setup, c);
    for (std::size_t n = 0; n <= static_cast<std::size_t>(d); ++n) {
      for (auto [x, y] : {std::pair{a.lower_raw[n], b.lower_raw[n]}, std::pair{a.upper_raw[n], b.upper_raw[n]}}) {
        const double scale = std::max(std::abs(x), std::abs(y));
        const double rel = scale > 0.0 ? std::abs(x - y) / scale : 0.0;
        worst = std::max(worst, rel);
        if (rel > 1e-10) ++over;
      }
    }
  }
  return {over == 0, fmt("200 cases, %d entries above 1e-10, max relative difference %.3g", over, worst)};
}

// c_m . d evaluated in extended precision from the hit-mask distribution of m
// photons. The non-click deficit 1 - c_{m,r} is summed from positive terms so
// projections onto S' rows, which vanish on c_inf, keep their sign at large m.
struct Projection {
  std::vector<ld> coincidence;  // c_{m,r}
  std::vector<ld> deficit;      // 1 - c_{m,r}
};

Projection project_photons(const std::vector<oracle::real>& dist, int d) {
  Projection p;
  p.coincidence.assign(static_cast<std::size_t>(d) + 1, 0.0L);
  p.deficit.assign(static_cast<std::size_t>(d) + 1, 0.0L);
  std::vector<int> count(static_cast<std::size_t>(d) + 1, 0);
  for (std::uint32_t w = 0; w < (1U << d); ++w) {
    const auto r = static_cast<std::size_t>(std::popcount(w));
    ld hit = 0.0L, miss = 0.0L;
    for (std::uint32_t m = 0; m < dist.size(); ++m) ((m & w) == w ? hit : miss) += dist[m];
    p.coincidence[r] += hit;
    p.deficit[r] += miss;
    ++count[r];
  }
  for (std::size_t r = 0; r < count.size(); ++r) {
    p.coincidence[r] /= count[r];
    p.deficit[r] /= count[r];
  }
  return p;
}

Outcome sign_structure() {
  std::mt19937_64 rng(20260103);
  int exceptions = 0, evaluations = 0;
  std::string first;
  for (int t = 0; t < 20; ++t) {
    const int d = 1 + t % 5 + (t % 5 == 0 ? 1 : 0);  // D in {2..5}
    const DetectorSetup setup = t < 4 ? DetectorSetup::uniform(d, 0.02 + 0.03 * t)
                                      : random_valid_setup(rng, d, 0.005, 0.15, 0.3);
    const BoundsEngine engine(setup);
    const auto& s = engine.s_basis().rows;
    const auto& sp = engine.s_prime_basis().rows;
    const auto eta = as_vector(setup.efficiencies());
    const std::size_t masks = std::size_t{1} << d;
    ld lost = 1.0L;
    for (double e : eta) lost -= e;
    std::vector<oracle::real> dist(masks, 0.0L), next(masks);
    dist[0] = 1.0L;
    for (int m = 1; m <= 200; ++m) {
      std::fill(next.begin(), next.end(), 0.0L);
      for (std::size_t k = 0; k < masks; ++k) {
        next[k] += dist[k] * lost;
        for (int i = 0; i < d; ++i) next[k | (std::size_t{1} << i)] += dist[k] * eta[static_cast<std::size_t>(i)];
      }
      dist.swap(next);
      if (m < d) continue;
      const auto pr = project_photons(dist, d);
      auto report = [&](bool ok, const char* what, int n) {
        ++evaluations;
        if (ok) return;
        if (exceptions++ == 0) first = fmt("%s D=%d m=%d n=%d", what, d, m, n);
      };
      for (int n = 0; n <= d; ++n) {
        const auto& row = s[static_cast<std::size_t>(n)];
        ld v = 0.0L;
        for (int r = 0; r <= d; ++r) v += pr.coincidence[static_cast<std::size_t>(r)] * row[static_cast<std::size_t>(r)];
        if (n == d) {
          report(v >= 1.0L - 1e-12L, "S tail", n);
        } else if (m > d) {
          report(v != 0.0L && (v > 0.0L) == ((d - n) % 2 == 0), "S sign", n);
        }
      }
      for (int n = 0; n <= d; ++n) {
        const auto& row = sp[static_cast<std::size_t>(n)];
        // c_inf . d_n = 0 for n < D and 1 for the infinity row.
        ld v = n == d ? 1.0L : 0.0L;
        for (int r = 1; r <= d; ++r) v -= pr.deficit[static_cast<std::size_t>(r)] * row[static_cast<std::size_t>(r)];
        if (n == d) {
          report(v <= 1.0L + 1e-12L, "S' infinity", n);
        } else {
          report(v != 0.0L && (v > 0.0L) == ((d - 1 - n) % 2 == 0), "S' sign", n);
        }
      }
    }
  }
  std::string detail = fmt("20 setups, m up to 200, %d evaluations, %d exceptions", evaluations, exceptions);
  if (exceptions) detail += " (first: " + first + ")";
  return {exceptions == 0, detail};
}

Outcome sum_identities() {
  std::mt19937_64 rng(20260104);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int d = 2 + t % 5;
    const auto setup = random_valid_setup(rng, d, 0.005, 0.15, 0.3);
    // Random coincidence vectors with O(1) normalized entries.
    std::vector<double> c{1.0};
    for (int r = 1; r <= d; ++r) c.push_back(std::min(1.0, 3.0 * u(rng) * diagonal_coincidence(setup, r)));
    const auto b = theorem1_bounds(setup, CoincidenceVector(c));
    double s = 0.0, sp = 0.0;
    for (double v : b.s_projection) s += v;
    for (double v : b.s_prime_projection) sp += v;
    worst = std::max({worst, std::abs(s - 1.0), std::abs(sp - 1.0)});
  }
  return {worst <= 1e-10, fmt("100 vectors, max |sum - 1| = %.3g", worst)};
}

Outcome monte_carlo() {
  const auto setup = DetectorSetup::uniform(4, 0.025);
  const auto source = PhotonSource::poissonian(0.5);
  const std::uint64_t n = 10'000'000;
  const auto a = simulate_pulses(setup, source, n, 20260105, 1);
  const auto b = simulate_pulses(setup, source, n, 20260105, 8);
  const auto model = c_obs_analytic(setup, source);
  const auto sigma = model_standard_errors(setup, source, n);
  bool within = true;
  std::string z;
  for (int r = 1; r <= 4; ++r) {
    const double zr = (a.coincidences[r] - model[r]) / sigma[static_cast<std::size_t>(r)];
    within = within && std::abs(zr) <= 4.0;
    z += fmt("%sz%d=%.2f", r > 1 ? " " : "", r, zr);
  }
  const bool same = a.subset_counts == b.subset_counts && a.pattern_counts == b.pattern_counts;
  return {within && same, fmt("N=1e7, %s, 1 vs 8 workers %s", z.c_str(), same ? "identical" : "DIFFER")};
}

std::string exponent_list(const EtaScalingTable& t) {
  std::string ex;
  for (std::size_t n = 0; n < t.exponents.size(); ++n) ex += fmt("%sn=%zu:%.3f", n ? " " : "", n, t.exponents[n]);
  return ex;
}

Outcome eta_scaling() {
  const auto source = PhotonSource::poissonian(0.2);
  const double eta = 0.01;
  const auto t = eta_scaling_diagnostic(source, 4, {eta, eta / 2});
  bool ok = true;
  for (double x : t.exponents) ok = ok && x >= 0.9 && x <= 1.1;
  // Shown for reference: the calibration efficiency 0.1 / 4, further from the small-eta limit.
  const auto wide = eta_scaling_diagnostic(source, 4, {0.025, 0.0125});
  return {ok, fmt("eta %.4g vs %.4g, exponents %s (at 0.025 vs 0.0125: %s)", eta, eta / 2, exponent_list(t).c_str(),
                  exponent_list(wide).c_str())};
}

Outcome optimality() {
  bool ok = true;
  std::string detail;
  struct Case {
    const char* name;
    PhotonSource source;
  };
  const std::vector<Case> cases{{"poisson(0.3)", PhotonSource::poissonian(0.3)},
                                {"poisson(0.9)", PhotonSource::poissonian(0.9)},
                                {"thermal(0.2)", PhotonSource::thermal(0.2)}};
  for (double eta : {0.025, 0.01}) {
    const auto setup = DetectorSetup::uniform(4, eta);
    for (const auto& c : cases) {
      const auto cobs = c_obs_analytic(setup, c.source);
      const auto cert = optimality_certificate(setup, cobs, theorem1_bounds(setup, cobs));
      const bool good = cert.s_nonnegative && cert.s_tight && cert.s_residual <= 1e-10;
      ok = ok && good;
      if (eta == 0.025) detail += fmt("%s residual %.2g %s; ", c.name, cert.s_residual, good ? "ok" : "NEGATIVE");
    }
  }
  const auto pre = optimality_precheck(PhotonSource::poissonian(1.5), 4);
  ok = ok && !pre.s.moment_pass;
  detail += fmt("poisson(1.5) moment condition %s", pre.s.moment_pass ? "passes (unexpected)" : "fails");
  return {ok, detail};
}

Outcome flooding() {
  const double eta = 0.025;
  const auto setup = DetectorSetup::uniform(4, eta);
  const double eps = std::pow(eta, 4);
  const auto plain = PhotonSource::poissonian(0.3);
  const auto flooded = PhotonSource::mixture({1.0 - eps, eps}, {plain, PhotonSource::fock(10'000)});
  const auto c0 = c_obs_analytic(setup, plain);
  const auto c1 = c_obs_analytic(setup, flooded);
  const auto b0 = theorem1_bounds(setup, c0);
  const auto b1 = theorem1_bounds(setup, c1);
  const double dc4 = c1[4] - c0[4];
  // Proportional envelope for p_1 with exact efficiencies: |dc_1| / c_1.
  const double envelope = std::abs(c1[1] - c0[1]) / c0[1];
  const double p1 = std::exp(-0.3) * 0.3;
  const double allowed = 2.0 * envelope * p1;
  const double shift_l = std::abs(b1.lower_raw[1] - b0.lower_raw[1]);
  const double shift_u = std::abs(b1.upper_raw[1] - b0.upper_raw[1]);
  const bool ok = dc4 >= 0.9 * eps && shift_l < allowed && shift_u < allowed;
  return {ok, fmt("dc4/eps=%.4f, allowed |dp_1| < %.3g; p_1^L (%s) shift %.3g, p_1^U (%s) shift %.3g", dc4 / eps,
                  allowed, to_string(b0.lower_basis[1]), shift_l, to_string(b0.upper_basis[1]), shift_u)};
}

// Independent key-rate evaluation: product-form coincidences for uniform
// efficiencies, long-double bounds over a 21-point uniform-shift grid of the
// efficiency box, and separately coded yield, error and rate formulas.
struct OracleBounds {
  std::vector<ld> lower, upper;
};

// Long-double bounds for uniform efficiency e: C and C' from the photon-routing
// oracle, inverted by Gauss-Jordan, rows routed by parity.
OracleBounds oracle_bounds(double e, int d, const std::vector<ld>& c) {
  const auto size = static_cast<std::size_t>(d) + 1;
  const std::vector<double> eta(size - 1, e);
  std::vector<std::vector<ld>> cm(size, std::vector<ld>(size)), cp;
  for (std::size_t n = 0; n < size; ++n) {
    const auto dist = oracle::hit_distribution(eta, static_cast<int>(n));
    for (std::size_t r = 0; r < size; ++r) {
      ld sum = 0.0L;
      int count = 0;
      for (std::uint32_t w = 0; w < (1U << d); ++w) {
        if (static_cast<std::size_t>(std::popcount(w)) != r) continue;
        sum += oracle::covered(dist, w);
        ++count;
      }
      cm[r][n] = sum / count;
    }
  }
  cp = cm;
  for (std::size_t r = 0; r < size; ++r) cp[r][size - 1] = 1.0L;
  const auto ds = oracle::inverse(cm);
  const auto dp = oracle::inverse(cp);
  auto dot = [&](const std::vector<ld>& row) {
    ld v = 0.0L;
    for (std::size_t r = 0; r < size; ++r) v += row[r] * c[r];
    return v;
  };
  OracleBounds b;
  for (int n = 0; n < d; ++n) {
    const ld s = dot(ds[static_cast<std::size_t>(n)]), sp = dot(dp[static_cast<std::size_t>(n)]);
    const bool upper_from_s = (d - n) % 2 == 0;
    b.upper.push_back(upper_from_s ? s : sp);
    b.lower.push_back(upper_from_s ? sp : s);
  }
  b.lower.push_back(dot(dp[size - 1]));
  b.upper.push_back(dot(ds[size - 1]));
  return b;
}

OracleBounds oracle_calibrated(double mu, int d, const CalibrationConfig& cfg) {
  const double eta = cfg.eta_total / d;
  // Poisson light splits into independent Poisson beams, so each detector
  // clicks independently with probability 1 - exp(-mu eta).
  const ld click = -std::expm1(-static_cast<ld>(mu) * eta);
  std::vector<ld> c{1.0L};
  for (int r = 1; r <= d; ++r) c.push_back(c.back() * click);
  OracleBounds out;
  out.lower.assign(static_cast<std::size_t>(d) + 1, 2.0L);
  out.upper.assign(static_cast<std::size_t>(d) + 1, -1.0L);
  const double lo = eta * (1 - cfg.relative_ambiguity), hi = eta * (1 + cfg.relative_ambiguity);
  const int g = cfg.worst_case ? 21 : 1;
  for (int k = 0; k < g; ++k) {
    const double e = g == 1 ? eta : lo + (hi - lo) * k / (g - 1);
    const auto b = oracle_bounds(e, d, c);
    for (std::size_t n = 0; n <= static_cast<std::size_t>(d); ++n) {
      out.lower[n] = std::min(out.lower[n], b.lower[n]);
      out.upper[n] = std::max(out.upper[n], b.upper[n]);
    }
  }
  for (auto& v : out.lower) v = std::clamp<ld>(v, 0.0L, 1.0L);
  for (auto& v : out.upper) v = std::clamp<ld>(v, 0.0L, 1.0L);
  return out;
}

ld h2(ld x) { return (x <= 0 || x >= 1) ? 0 : -x * std::log2(x) - (1 - x) * std::log2(1 - x); }

ld oracle_rate(KeyMode mode, double mu, double tau, const ProtocolParams& prm, const CalibrationConfig& cfg) {
  const ld mup = mu / 10.0;
  const ld y0 = prm.Y0, q = prm.q, qp = prm.q_prime;
  const ld sig = 1 - std::exp(-static_cast<ld>(mu) * tau), dec = 1 - std::exp(-mup * tau);
  const ld Q = sig + y0, QE = prm.channel_error * sig + y0 / 2;
  const ld Qp = dec + y0, QEp = prm.channel_error * dec + y0 / 2;
  auto pois = [](ld m, int n) {
    ld v = std::exp(-m);
    for (int k = 1; k <= n; ++k) v *= m / k;
    return v;
  };
  ld y1 = 0, p1 = 0, pp1 = 0, pp0 = 0;
  if (mode == KeyMode::poisson_known) {
    const ld a0 = pois(mu, 0), a1 = pois(mu, 1), a2 = pois(mu, 2);
    const ld b0 = pois(mup, 0), b1 = pois(mup, 1), b2 = pois(mup, 2);
    y1 = (a2 * Qp - b2 * Q - (b0 * a2 - a0 * b2) * y0) / (b1 * a2 - a1 * b2);
    p1 = a1;
    pp1 = b1;
    pp0 = b0;
  } else {
    const int d = detectors_of(mode);
    const auto s = oracle_calibrated(mu, d, cfg);
    const auto t = oracle_calibrated(static_cast<double>(mup), d, cfg);
    bool chain = d >= 3 && s.lower[2] * t.upper[1] >= s.lower[1] * t.upper[2];
    for (int n = 3; n < d && chain; ++n) chain = s.lower[n] * t.upper[2] >= s.lower[2] * t.upper[n];
    const ld den = t.upper[1] * s.lower[2] - s.lower[1] * t.upper[2];
    if (chain && den > 0) {
      y1 = (s.lower[2] * Qp - t.upper[2] * Q - (t.upper[0] * s.lower[2] - s.lower[0] * t.upper[2]) * y0 -
            s.lower[2] * t.upper[static_cast<std::size_t>(d)]) /
           den;
    } else if (!chain && t.upper[1] > 0) {
      y1 = (Qp - t.upper[0] * y0 - t.upper[static_cast<std::size_t>(d)]) / t.upper[1];
    }
    p1 = s.lower[1];
    pp1 = t.lower[1];
    pp0 = t.lower[0];
  }
  y1 = std::clamp<ld>(y1, 0, 1);
  ld e1 = 0.5;
  if (y1 > 0 && pp1 > 0) e1 = std::clamp<ld>((QEp - pp0 * 0.5L * y0) / (pp1 * y1), 0, 0.5);
  const ld gain = q * Q + qp * Qp;
  const ld r = (q * p1 + qp * pp1) * y1 * (1 - h2(e1)) - gain * h2((q * QE + qp * QEp) / gain);
  return std::max<ld>(r, 0);
}

Outcome key_rates() {
  const ProtocolParams params;
  const CalibrationConfig cfg;
  const std::vector<double> taus{1.0, 0.5, 0.1, 0.05, 0.01};
  const std::vector<KeyMode> modes{KeyMode::poisson_known, KeyMode::D4, KeyMode::D3, KeyMode::D2};
  const auto pts = keyrate_sweep(modes, taus, params, cfg);
  std::map<std::pair<int, double>, double> rate;
  double worst = 0.0;
  std::string worst_at = "none";
  for (const auto& p : pts) {
    rate[{static_cast<int>(p.mode), p.tau}] = p.R;
    const ld ref = oracle_rate(p.mode, p.mu, p.tau, params, cfg);
    const double scale = std::max(std::abs(p.R), static_cast<double>(std::abs(ref)));
    const double dev = scale > 0 ? static_cast<double>(std::abs(p.R - ref) / scale) : 0.0;
    if (dev > worst) {
      worst = dev;
      worst_at = fmt("%s tau=%g", to_string(p.mode), p.tau);
    }
  }
  bool ordered = true;
  for (double tau : taus) {
    for (std::size_t m = 0; m + 1 < modes.size(); ++m) {
      ordered = ordered && rate[{static_cast<int>(modes[m]), tau}] >= rate[{static_cast<int>(modes[m + 1]), tau}];
    }
  }
  const double ratio = rate[{static_cast<int>(KeyMode::D4), 0.1}] / rate[{static_cast<int>(KeyMode::poisson_known), 0.1}];
  const bool ok = ordered && ratio >= 0.5 && worst <= 1e-12;
  return {ok, fmt("ordering %s, R_D4/R_poisson at tau=0.1 = %.4f, max relative deviation from independent "
                  "evaluation %.3g (%s)",
                  ordered ? "holds" : "VIOLATED", ratio, worst, worst_at.c_str())};
}

Outcome coverage() {
  const DetectorSetup setup({0.2, 0.2});
  const double mu = 0.5;
  const auto source = PhotonSource::poissonian(mu);
  const double p1 = mu * std::exp(-mu);
  const std::uint64_t pulses = 1'000'000;
  int covered = 0;
  double width = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto stats = simulate_pulses(setup, source, pulses, 900000 + static_cast<std::uint64_t>(t));
    UncertaintyInputs in = exact_inputs(setup, stats.coincidences);
    in.c_obs = confidence_intervals(2, stats.subset_counts, pulses, 0.05);
    const auto b = worstcase_bounds(in).bounds;
    if (b.lower_raw[1] <= p1 && p1 <= b.upper_raw[1]) ++covered;
    width += b.upper_raw[1] - b.lower_raw[1];
  }
  return {covered >= 180, fmt("%d/200 trials contain p_1 = %.4f (mean width %.3f, delta 0.05, N=1e6)", covered, p1,
                              width / 200)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "sandwich", 30, sandwich},
      {2, "closed-form equivalence", 10, closed_form_equivalence},
      {3, "sign structure", 0, sign_structure},
      {4, "sum identities", 0, sum_identities},
      {5, "Monte Carlo vs analytic", 120, monte_carlo},
      {6, "eta scaling", 0, eta_scaling},
      {7, "optimality", 0, optimality},
      {8, "flooding", 0, flooding},
      {9, "key-rate curves", 300, key_rates},
      {10, "uncertainty coverage", 0, coverage},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.2f s", secs);
    if (c.limit_s > 0) {
      timing += fmt(" (limit %.0f s)", c.limit_s);
      if (secs >= c.limit_s) {
        o.pass = false;
        timing += " TOO SLOW";
      }
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %d [%s]: %s; %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
