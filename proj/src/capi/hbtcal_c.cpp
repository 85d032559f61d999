// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#include "hbtcal/hbtcal.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "hbtcal/bounds.hpp"
#include "hbtcal/coincidence.hpp"
#include "hbtcal/decoy.hpp"
#include "hbtcal/diagnostics.hpp"
#include "hbtcal/error.hpp"
#include "hbtcal/simulation.hpp"
#include "hbtcal/uncertainty.hpp"

struct hbt_setup {
  hbtcal::DetectorSetup value;
};

struct hbt_source {
  hbtcal::PhotonSource value;
};

struct hbt_simulation {
  hbtcal::ClickStatistics value;
};

struct hbt_bounds {
  hbtcal::BoundsResult value;
  std::vector<std::string> skipped;
};

struct hbt_report {
  hbtcal::ValidationReport value;
};

namespace {

thread_local std::string last_error;

hbt_status status_of(hbtcal::ErrorCode code) {
  using hbtcal::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return HBT_ERR_INVALID_ARGUMENT;
    case ErrorCode::numerical_conditioning: return HBT_ERR_NUMERICAL_CONDITIONING;
    case ErrorCode::internal_consistency: return HBT_ERR_INTERNAL_CONSISTENCY;
    case ErrorCode::unsupported_dimension: return HBT_ERR_UNSUPPORTED_DIMENSION;
    case ErrorCode::unsupported_source: return HBT_ERR_UNSUPPORTED_SOURCE;
    case ErrorCode::precondition_failed: return HBT_ERR_PRECONDITION_FAILED;
    case ErrorCode::diagnostic_unavailable: return HBT_ERR_DIAGNOSTIC_UNAVAILABLE;
    case ErrorCode::degenerate_channel: return HBT_ERR_DEGENERATE_CHANNEL;
    case ErrorCode::sampling_overflow: return HBT_ERR_SAMPLING_OVERFLOW;
  }
  return HBT_ERR_INTERNAL;
}

struct BufferTooSmall {
  std::string what;
};

struct NullPointer {};

template <typename F>
hbt_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return HBT_OK;
  } catch (const hbtcal::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const BufferTooSmall& e) {
    last_error = e.what;
    return HBT_ERR_BUFFER_TOO_SMALL;
  } catch (const NullPointer&) {
    last_error = "null pointer argument";
    return HBT_ERR_NULL_POINTER;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return HBT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return HBT_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return HBT_ERR_INTERNAL;
  }
}

template <typename... P>
void not_null(const P*... ptrs) {
  if (((ptrs == nullptr) || ...)) throw NullPointer{};
}

template <typename T, typename Range>
void copy_out(const Range& values, T* out, std::size_t capacity) {
  not_null(out);
  const auto size = static_cast<std::size_t>(std::distance(std::begin(values), std::end(values)));
  if (capacity < size) {
    throw BufferTooSmall{"output needs " + std::to_string(size) + " entries, capacity is " + std::to_string(capacity)};
  }
  std::copy(std::begin(values), std::end(values), out);
}

hbtcal::CoincidenceVector make_c_obs(const double* c_obs, std::size_t count) {
  not_null(c_obs);
  return hbtcal::CoincidenceVector(std::vector<double>(c_obs, c_obs + count));
}

hbtcal::ProtocolParams to_params(const hbt_protocol_params* p) {
  hbtcal::ProtocolParams out;
  if (p) {
    out.q = p->q;
    out.q_prime = p->q_prime;
    out.Y0 = p->Y0;
    out.e0 = p->e0;
    out.channel_error = p->channel_error;
  }
  return out;
}

hbtcal::CalibrationConfig to_config(const hbt_calibration_config* c) {
  hbtcal::CalibrationConfig out;
  if (c) {
    out.eta_total = c->eta_total;
    out.relative_ambiguity = c->relative_ambiguity;
    out.worst_case = c->worst_case != 0;
    out.grid_points = c->grid_points > 0 ? c->grid_points : 21;
  }
  return out;
}

hbtcal::KeyMode to_mode(hbt_key_mode m) {
  switch (m) {
    case HBT_MODE_POISSON_KNOWN: return hbtcal::KeyMode::poisson_known;
    case HBT_MODE_D4: return hbtcal::KeyMode::D4;
    case HBT_MODE_D3: return hbtcal::KeyMode::D3;
    case HBT_MODE_D2: return hbtcal::KeyMode::D2;
  }
  hbtcal::fail(hbtcal::ErrorCode::invalid_argument, "unknown key-rate mode");
}

hbt_key_mode from_mode(hbtcal::KeyMode m) {
  switch (m) {
    case hbtcal::KeyMode::poisson_known: return HBT_MODE_POISSON_KNOWN;
    case hbtcal::KeyMode::D4: return HBT_MODE_D4;
    case hbtcal::KeyMode::D3: return HBT_MODE_D3;
    case hbtcal::KeyMode::D2: return HBT_MODE_D2;
  }
  return HBT_MODE_POISSON_KNOWN;
}

hbt_keyrate_point to_point(const hbtcal::KeyRatePoint& p) {
  hbt_keyrate_point out{};
  out.mode = from_mode(p.mode);
  out.tau = p.tau;
  out.mu = p.mu;
  out.mu_prime = p.mu_prime;
  out.Y1L = p.Y1L;
  out.e1U = p.e1U;
  out.e1U_raw = p.e1U_raw;
  out.p1_lower = p.p1_lower;
  out.p1_prime_lower = p.p1_prime_lower;
  out.R = p.R;
  out.R_raw = p.R_raw;
  out.no_key = p.no_key ? 1 : 0;
  out.downgraded = p.downgraded ? 1 : 0;
  return out;
}

hbt_family_check to_family(const hbtcal::OptimalityFamilyCheck& f) {
  hbt_family_check out{};
  out.detectors = f.detectors;
  out.population_pass = f.population_pass ? 1 : 0;
  out.moment_ratio = f.moment_ratio;
  out.moment_pass = f.moment_pass ? 1 : 0;
  out.limit_value = f.limit_value;
  out.passed = f.passed() ? 1 : 0;
  return out;
}

template <typename Handle, typename Value>
void emit(Handle** out, Value&& value) {
  not_null(out);
  *out = new Handle{std::forward<Value>(value)};
}

}  // namespace

extern "C" {

const char* hbt_version(void) { return "1.0.0"; }

const char* hbt_status_name(hbt_status status) {
  switch (status) {
    case HBT_OK: return "ok";
    case HBT_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case HBT_ERR_NUMERICAL_CONDITIONING: return "numerical-conditioning";
    case HBT_ERR_INTERNAL_CONSISTENCY: return "internal-consistency";
    case HBT_ERR_UNSUPPORTED_DIMENSION: return "unsupported-dimension";
    case HBT_ERR_UNSUPPORTED_SOURCE: return "unsupported-source";
    case HBT_ERR_PRECONDITION_FAILED: return "precondition-failed";
    case HBT_ERR_DIAGNOSTIC_UNAVAILABLE: return "diagnostic-unavailable";
    case HBT_ERR_DEGENERATE_CHANNEL: return "degenerate-channel";
    case HBT_ERR_SAMPLING_OVERFLOW: return "sampling-overflow";
    case HBT_ERR_BUFFER_TOO_SMALL: return "buffer-too-small";
    case HBT_ERR_NULL_POINTER: return "null-pointer";
    case HBT_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* hbt_last_error(void) { return last_error.c_str(); }

hbt_status hbt_setup_create(const double* eta, size_t detectors, hbt_setup** out) {
  return guard([&] {
    not_null(eta);
    emit(out, hbtcal::DetectorSetup(std::vector<double>(eta, eta + detectors)));
  });
}

hbt_status hbt_setup_uniform(int detectors, double eta, hbt_setup** out) {
  return guard([&] { emit(out, hbtcal::DetectorSetup::uniform(detectors, eta)); });
}

void hbt_setup_destroy(hbt_setup* setup) { delete setup; }

int hbt_setup_detectors(const hbt_setup* setup) { return setup ? setup->value.detectors() : 0; }

hbt_status hbt_setup_efficiencies(const hbt_setup* setup, double* out, size_t capacity) {
  return guard([&] {
    not_null(setup);
    copy_out(setup->value.efficiencies(), out, capacity);
  });
}

hbt_status hbt_setup_xi(const hbt_setup* setup, int i, int j, double* out) {
  return guard([&] {
    not_null(setup, out);
    *out = hbtcal::xi(setup->value, i, j);
  });
}

hbt_status hbt_setup_validate(const hbt_setup* setup, hbt_report** out) {
  return guard([&] {
    not_null(setup);
    emit(out, hbtcal::validate_setup(setup->value));
  });
}

void hbt_report_destroy(hbt_report* report) { delete report; }

int hbt_report_valid(const hbt_report* report) { return report && report->value.valid() ? 1 : 0; }

size_t hbt_report_count(const hbt_report* report) { return report ? report->value.violations.size() : 0; }

const char* hbt_report_message(const hbt_report* report, size_t index) {
  if (!report || index >= report->value.violations.size()) return nullptr;
  return report->value.violations[index].c_str();
}

hbt_status hbt_source_poissonian(double mean, hbt_source** out) {
  return guard([&] { emit(out, hbtcal::PhotonSource::poissonian(mean)); });
}

hbt_status hbt_source_thermal(double mean, hbt_source** out) {
  return guard([&] { emit(out, hbtcal::PhotonSource::thermal(mean)); });
}

hbt_status hbt_source_finite(const double* probabilities, size_t count, hbt_source** out) {
  return guard([&] {
    not_null(probabilities);
    emit(out, hbtcal::PhotonSource::finite(std::vector<double>(probabilities, probabilities + count)));
  });
}

hbt_status hbt_source_fock(int photons, hbt_source** out) {
  return guard([&] { emit(out, hbtcal::PhotonSource::fock(photons)); });
}

hbt_status hbt_source_mixture(const double* weights, const hbt_source* const* components, size_t count,
                              hbt_source** out) {
  return guard([&] {
    not_null(weights, components);
    std::vector<hbtcal::PhotonSource> parts;
    for (size_t i = 0; i < count; ++i) {
      not_null(components[i]);
      parts.push_back(components[i]->value);
    }
    emit(out, hbtcal::PhotonSource::mixture(std::vector<double>(weights, weights + count), std::move(parts)));
  });
}

void hbt_source_destroy(hbt_source* source) { delete source; }

hbt_status hbt_source_mean(const hbt_source* source, double* out) {
  return guard([&] {
    not_null(source, out);
    *out = source->value.mean();
  });
}

hbt_status hbt_source_probability(const hbt_source* source, int n, double* out) {
  return guard([&] {
    not_null(source, out);
    *out = source->value.probability(n);
  });
}

hbt_status hbt_factorial_moment(const hbt_source* source, int r, double* out) {
  return guard([&] {
    not_null(source, out);
    *out = hbtcal::factorial_moment(source->value, r);
  });
}

hbt_status hbt_normalized_moment(const hbt_source* source, int r, double* out) {
  return guard([&] {
    not_null(source, out);
    *out = hbtcal::normalized_moment(source->value, r);
  });
}

hbt_status hbt_c_obs_analytic(const hbt_setup* setup, const hbt_source* source, double* out, size_t capacity) {
  return guard([&] {
    not_null(setup, source);
    copy_out(hbtcal::c_obs_analytic(setup->value, source->value).entries(), out, capacity);
  });
}

hbt_status hbt_c_nr(const hbt_setup* setup, int n, int r, double* out) {
  return guard([&] {
    not_null(setup, out);
    *out = hbtcal::c_nr(setup->value, n, r);
  });
}

hbt_status hbt_coincidence_matrix(const hbt_setup* setup, hbt_basis basis, double* out, size_t capacity) {
  return guard([&] {
    not_null(setup);
    const auto m = basis == HBT_BASIS_S ? hbtcal::build_C(setup->value) : hbtcal::build_C_prime(setup->value);
    const int size = m.entries.size();
    std::vector<double> flat;
    for (int r = 0; r < size; ++r) {
      for (int n = 0; n < size; ++n) flat.push_back(m.entries(r, n));
    }
    copy_out(flat, out, capacity);
  });
}

hbt_status hbt_reciprocal_basis(const hbt_setup* setup, hbt_basis basis, double* out, size_t capacity,
                                double* residual) {
  return guard([&] {
    not_null(setup);
    const hbtcal::BoundsEngine engine(setup->value);
    const auto& b = basis == HBT_BASIS_S ? engine.s_basis() : engine.s_prime_basis();
    std::vector<double> flat;
    for (const auto& row : b.rows) flat.insert(flat.end(), row.begin(), row.end());
    copy_out(flat, out, capacity);
    if (residual) *residual = b.residual;
  });
}

hbt_status hbt_simulate(const hbt_setup* setup, const hbt_source* source, uint64_t pulses, uint64_t seed,
                        unsigned workers, hbt_simulation** out) {
  return guard([&] {
    not_null(setup, source);
    emit(out, hbtcal::simulate_pulses(setup->value, source->value, pulses, seed, workers));
  });
}

hbt_status hbt_simulation_from_counts(int detectors, const uint64_t* subset_counts, size_t count, uint64_t pulses,
                                      hbt_simulation** out) {
  return guard([&] {
    not_null(subset_counts);
    emit(out, hbtcal::statistics_from_subset_counts(detectors, std::span(subset_counts, count), pulses));
  });
}

void hbt_simulation_destroy(hbt_simulation* sim) { delete sim; }

int hbt_simulation_detectors(const hbt_simulation* sim) { return sim ? sim->value.detectors : 0; }

uint64_t hbt_simulation_pulses(const hbt_simulation* sim) { return sim ? sim->value.pulses : 0; }

hbt_status hbt_simulation_subset_counts(const hbt_simulation* sim, uint64_t* out, size_t capacity) {
  return guard([&] {
    not_null(sim);
    copy_out(sim->value.subset_counts, out, capacity);
  });
}

hbt_status hbt_simulation_coincidences(const hbt_simulation* sim, double* out, size_t capacity) {
  return guard([&] {
    not_null(sim);
    copy_out(sim->value.coincidences.entries(), out, capacity);
  });
}

hbt_status hbt_simulation_standard_errors(const hbt_simulation* sim, double* out, size_t capacity) {
  return guard([&] {
    not_null(sim);
    copy_out(sim->value.standard_errors, out, capacity);
  });
}

hbt_status hbt_model_standard_errors(const hbt_setup* setup, const hbt_source* source, uint64_t pulses,
                                     double* out, size_t capacity) {
  return guard([&] {
    not_null(setup, source);
    copy_out(hbtcal::model_standard_errors(setup->value, source->value, pulses), out, capacity);
  });
}

hbt_status hbt_bounds_theorem1(const hbt_setup* setup, const double* c_obs, size_t count, hbt_bounds** out) {
  return guard([&] {
    not_null(setup);
    emit(out, hbt_bounds{hbtcal::theorem1_bounds(setup->value, make_c_obs(c_obs, count)), {}});
  });
}

hbt_status hbt_bounds_closed_form(const hbt_setup* setup, const double* c_obs, size_t count, hbt_bounds** out) {
  return guard([&] {
    not_null(setup);
    emit(out, hbt_bounds{hbtcal::closedform_bounds(setup->value, make_c_obs(c_obs, count)), {}});
  });
}

hbt_status hbt_bounds_worst_case(const hbt_interval* eta, size_t detectors, const hbt_interval* c_obs, size_t count,
                                 hbt_eta_scan scan, int grid_points, hbt_bounds** out) {
  return guard([&] {
    not_null(eta, c_obs);
    hbtcal::UncertaintyInputs in;
    for (size_t i = 0; i < detectors; ++i) in.eta.push_back({eta[i].lo, eta[i].hi});
    for (size_t r = 0; r < count; ++r) in.c_obs.push_back({c_obs[r].lo, c_obs[r].hi});
    in.scan = scan == HBT_SCAN_BOX ? hbtcal::EtaScan::box : hbtcal::EtaScan::uniform_shift;
    if (grid_points > 0) in.grid_points = grid_points;
    auto result = hbtcal::worstcase_bounds(in);
    emit(out, hbt_bounds{std::move(result.bounds), std::move(result.skipped)});
  });
}

void hbt_bounds_destroy(hbt_bounds* bounds) { delete bounds; }

int hbt_bounds_detectors(const hbt_bounds* bounds) { return bounds ? bounds->value.detectors : 0; }

hbt_status hbt_bounds_get(const hbt_bounds* bounds, hbt_bound_field field, double* out, size_t capacity) {
  return guard([&] {
    not_null(bounds);
    const auto& b = bounds->value;
    switch (field) {
      case HBT_LOWER_RAW: copy_out(b.lower_raw, out, capacity); return;
      case HBT_UPPER_RAW: copy_out(b.upper_raw, out, capacity); return;
      case HBT_LOWER: copy_out(b.lower, out, capacity); return;
      case HBT_UPPER: copy_out(b.upper, out, capacity); return;
      case HBT_S_PROJECTION:
      case HBT_S_PRIME_PROJECTION: {
        const auto& v = field == HBT_S_PROJECTION ? b.s_projection : b.s_prime_projection;
        hbtcal::require(!v.empty(), hbtcal::ErrorCode::invalid_argument, "projections are not available for these bounds");
        copy_out(v, out, capacity);
        return;
      }
    }
    hbtcal::fail(hbtcal::ErrorCode::invalid_argument, "unknown bound field");
  });
}

hbt_status hbt_bounds_basis(const hbt_bounds* bounds, int upper, hbt_basis* out, size_t capacity) {
  return guard([&] {
    not_null(bounds);
    const auto& src = upper ? bounds->value.upper_basis : bounds->value.lower_basis;
    std::vector<hbt_basis> v;
    for (auto b : src) v.push_back(b == hbtcal::Basis::S ? HBT_BASIS_S : HBT_BASIS_S_PRIME);
    copy_out(v, out, capacity);
  });
}

size_t hbt_bounds_skipped_count(const hbt_bounds* bounds) { return bounds ? bounds->skipped.size() : 0; }

const char* hbt_bounds_skipped_message(const hbt_bounds* bounds, size_t index) {
  if (!bounds || index >= bounds->skipped.size()) return nullptr;
  return bounds->skipped[index].c_str();
}

hbt_status hbt_bounds_certificate(const hbt_setup* setup, const double* c_obs, size_t count,
                                  const hbt_bounds* bounds, hbt_certificate* out) {
  return guard([&] {
    not_null(setup, bounds, out);
    const auto cert = hbtcal::optimality_certificate(setup->value, make_c_obs(c_obs, count), bounds->value);
    hbt_certificate c{};
    c.s_nonnegative = cert.s_nonnegative ? 1 : 0;
    c.s_tight = cert.s_tight ? 1 : 0;
    c.s_residual = cert.s_residual;
    c.s_size = cert.saturating_distribution.size();
    std::copy(cert.saturating_distribution.begin(), cert.saturating_distribution.end(), c.s_distribution);
    c.s_prime_nonnegative = cert.s_prime_nonnegative ? 1 : 0;
    c.s_prime_tight = cert.s_prime_tight ? 1 : 0;
    c.s_prime_residual = cert.s_prime_residual;
    c.s_prime_size = cert.s_prime_distribution.size();
    std::copy(cert.s_prime_distribution.begin(), cert.s_prime_distribution.end(), c.s_prime_distribution);
    c.tail_mass_at_infinity = cert.tail_mass_at_infinity;
    *out = c;
  });
}

hbt_status hbt_optimality_precheck(const hbt_source* source, int detectors, hbt_precheck* out) {
  return guard([&] {
    not_null(source, out);
    const auto p = hbtcal::optimality_precheck(source->value, detectors);
    out->mean = p.mean;
    out->s = to_family(p.s);
    out->s_prime = to_family(p.s_prime);
  });
}

hbt_status hbt_eta_scaling(const hbt_source* source, int detectors, const double* etas, size_t eta_count,
                           double* gaps, size_t gaps_capacity, double* exponents, size_t exponents_capacity) {
  return guard([&] {
    not_null(source, etas);
    const auto t = hbtcal::eta_scaling_diagnostic(source->value, detectors, std::vector<double>(etas, etas + eta_count));
    std::vector<double> flat;
    for (const auto& row : t.rows) flat.insert(flat.end(), row.gap.begin(), row.gap.end());
    copy_out(flat, gaps, gaps_capacity);
    copy_out(t.exponents, exponents, exponents_capacity);
  });
}

hbt_status hbt_confidence_intervals(int detectors, const uint64_t* subset_clicks, size_t count, uint64_t pulses,
                                    double delta, hbt_interval* out, size_t capacity) {
  return guard([&] {
    not_null(subset_clicks);
    const auto iv = hbtcal::confidence_intervals(
        detectors, std::vector<std::uint64_t>(subset_clicks, subset_clicks + count), pulses, delta);
    std::vector<hbt_interval> v;
    for (const auto& i : iv) v.push_back({i.lo, i.hi});
    copy_out(v, out, capacity);
  });
}

hbt_status hbt_propagation_estimate(const hbt_setup* setup, const double* c_obs, size_t count,
                                    const double* relative_c, double relative_eta, double* out, size_t capacity,
                                    int* weak_regime) {
  return guard([&] {
    not_null(setup, relative_c);
    const auto est = hbtcal::propagation_estimate(setup->value, make_c_obs(c_obs, count),
                                                  std::vector<double>(relative_c, relative_c + count), relative_eta);
    copy_out(est.relative, out, capacity);
    if (weak_regime) *weak_regime = est.weak_regime ? 1 : 0;
  });
}

hbt_protocol_params hbt_protocol_defaults(void) {
  const hbtcal::ProtocolParams p;
  return hbt_protocol_params{p.q, p.q_prime, p.Y0, p.e0, p.channel_error};
}

hbt_calibration_config hbt_calibration_defaults(void) {
  const hbtcal::CalibrationConfig c;
  return hbt_calibration_config{c.eta_total, c.relative_ambiguity, c.worst_case ? 1 : 0, c.grid_points};
}

const char* hbt_key_mode_name(hbt_key_mode mode) {
  switch (mode) {
    case HBT_MODE_POISSON_KNOWN: return "poisson-known";
    case HBT_MODE_D4: return "D4";
    case HBT_MODE_D3: return "D3";
    case HBT_MODE_D2: return "D2";
  }
  return nullptr;
}

hbt_status hbt_key_mode_parse(const char* name, hbt_key_mode* out) {
  return guard([&] {
    not_null(name, out);
    *out = from_mode(hbtcal::parse_key_mode(name));
  });
}

hbt_status hbt_channel_observations(double mu, double mu_prime, double tau, double Y0, double channel_error,
                                    hbt_channel* out) {
  return guard([&] {
    not_null(out);
    const auto o = hbtcal::channel_observations(mu, mu_prime, tau, Y0, channel_error);
    *out = hbt_channel{o.Q, o.QE, o.E(), o.Q_prime, o.QE_prime, o.E_prime()};
  });
}

hbt_status hbt_keyrate_evaluate(hbt_key_mode mode, double mu, double tau, const hbt_protocol_params* params,
                                const hbt_calibration_config* config, hbt_keyrate_point* out) {
  return guard([&] {
    not_null(out);
    *out = to_point(hbtcal::evaluate_key_rate(to_mode(mode), mu, tau, to_params(params), to_config(config)));
  });
}

hbt_status hbt_keyrate_optimize(hbt_key_mode mode, double tau, const hbt_protocol_params* params,
                                const hbt_calibration_config* config, hbt_keyrate_point* out) {
  return guard([&] {
    not_null(out);
    const auto cfg = to_config(config);
    hbtcal::CalibrationCache cache(cfg);
    *out = to_point(hbtcal::optimize_mu(to_mode(mode), tau, to_params(params), cfg, &cache));
  });
}

hbt_status hbt_keyrate_sweep(const hbt_key_mode* modes, size_t mode_count, const double* taus, size_t tau_count,
                             const hbt_protocol_params* params, const hbt_calibration_config* config,
                             unsigned workers, hbt_keyrate_point* out, size_t capacity) {
  return guard([&] {
    not_null(modes, taus);
    std::vector<hbtcal::KeyMode> m;
    for (size_t i = 0; i < mode_count; ++i) m.push_back(to_mode(modes[i]));
    const auto pts = hbtcal::keyrate_sweep(m, std::vector<double>(taus, taus + tau_count), to_params(params),
                                           to_config(config), workers);
    std::vector<hbt_keyrate_point> v;
    for (const auto& p : pts) v.push_back(to_point(p));
    copy_out(v, out, capacity);
  });
}

}  // extern "C"
