/* Copyright 2026 The hbtcal Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to hbtcal. Objects are opaque handles owned by the caller and
 * released with the matching *_destroy function. Every fallible call returns
 * an hbt_status; on failure hbt_last_error() describes the problem for the
 * calling thread. Array outputs take a capacity and fail with
 * HBT_ERR_BUFFER_TOO_SMALL when it is insufficient.
 */
#ifndef HBTCAL_HBTCAL_H
#define HBTCAL_HBTCAL_H

#include <stddef.h>
#include <stdint.h>

#if defined(HBT_BUILDING_LIBRARY)
#define HBT_API __attribute__((visibility("default")))
#else
#define HBT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define HBT_MAX_DETECTORS 24

typedef enum hbt_status {
  HBT_OK = 0,
  HBT_ERR_INVALID_ARGUMENT = 1,
  HBT_ERR_NUMERICAL_CONDITIONING = 2,
  HBT_ERR_INTERNAL_CONSISTENCY = 3,
  HBT_ERR_UNSUPPORTED_DIMENSION = 4,
  HBT_ERR_UNSUPPORTED_SOURCE = 5,
  HBT_ERR_PRECONDITION_FAILED = 6,
  HBT_ERR_DIAGNOSTIC_UNAVAILABLE = 7,
  HBT_ERR_DEGENERATE_CHANNEL = 8,
  HBT_ERR_SAMPLING_OVERFLOW = 9,
  HBT_ERR_BUFFER_TOO_SMALL = 10,
  HBT_ERR_NULL_POINTER = 11,
  HBT_ERR_INTERNAL = 12
} hbt_status;

typedef enum hbt_basis { HBT_BASIS_S = 0, HBT_BASIS_S_PRIME = 1 } hbt_basis;

typedef enum hbt_bound_field {
  HBT_LOWER_RAW = 0,
  HBT_UPPER_RAW = 1,
  HBT_LOWER = 2,
  HBT_UPPER = 3,
  HBT_S_PROJECTION = 4,
  HBT_S_PRIME_PROJECTION = 5
} hbt_bound_field;

typedef enum hbt_eta_scan { HBT_SCAN_UNIFORM_SHIFT = 0, HBT_SCAN_BOX = 1 } hbt_eta_scan;

typedef enum hbt_key_mode {
  HBT_MODE_POISSON_KNOWN = 0,
  HBT_MODE_D4 = 1,
  HBT_MODE_D3 = 2,
  HBT_MODE_D2 = 3
} hbt_key_mode;

typedef struct hbt_setup hbt_setup;
typedef struct hbt_source hbt_source;
typedef struct hbt_simulation hbt_simulation;
typedef struct hbt_bounds hbt_bounds;
typedef struct hbt_report hbt_report;

typedef struct hbt_interval {
  double lo;
  double hi;
} hbt_interval;

typedef struct hbt_certificate {
  int s_nonnegative;
  int s_tight;
  double s_residual;
  size_t s_size; /* p_0..p_D */
  double s_distribution[HBT_MAX_DETECTORS + 1];
  int s_prime_nonnegative;
  int s_prime_tight;
  double s_prime_residual;
  size_t s_prime_size; /* p_0..p_{D-1} */
  double s_prime_distribution[HBT_MAX_DETECTORS];
  double tail_mass_at_infinity;
} hbt_certificate;

typedef struct hbt_family_check {
  int detectors;
  int population_pass;
  double moment_ratio;
  int moment_pass;
  double limit_value;
  int passed;
} hbt_family_check;

typedef struct hbt_precheck {
  double mean;
  hbt_family_check s;
  hbt_family_check s_prime;
} hbt_precheck;

typedef struct hbt_protocol_params {
  double q;
  double q_prime;
  double Y0;
  double e0;
  double channel_error;
} hbt_protocol_params;

typedef struct hbt_calibration_config {
  double eta_total;
  double relative_ambiguity;
  int worst_case;
  int grid_points;
} hbt_calibration_config;

typedef struct hbt_channel {
  double Q;
  double QE;
  double E;
  double Q_prime;
  double QE_prime;
  double E_prime;
} hbt_channel;

typedef struct hbt_keyrate_point {
  hbt_key_mode mode;
  double tau;
  double mu;
  double mu_prime;
  double Y1L;
  double e1U;
  double e1U_raw;
  double p1_lower;
  double p1_prime_lower;
  double R;
  double R_raw;
  int no_key;
  int downgraded;
} hbt_keyrate_point;

HBT_API const char* hbt_version(void);
HBT_API const char* hbt_status_name(hbt_status status);
/* Message of the last failure on this thread ("" if none). */
HBT_API const char* hbt_last_error(void);

/* Detector setups. */
HBT_API hbt_status hbt_setup_create(const double* eta, size_t detectors, hbt_setup** out);
HBT_API hbt_status hbt_setup_uniform(int detectors, double eta, hbt_setup** out);
HBT_API void hbt_setup_destroy(hbt_setup* setup);
HBT_API int hbt_setup_detectors(const hbt_setup* setup);
HBT_API hbt_status hbt_setup_efficiencies(const hbt_setup* setup, double* out, size_t capacity);
HBT_API hbt_status hbt_setup_xi(const hbt_setup* setup, int i, int j, double* out);
/* Always succeeds for a valid handle; the report lists violated conditions. */
HBT_API hbt_status hbt_setup_validate(const hbt_setup* setup, hbt_report** out);

HBT_API void hbt_report_destroy(hbt_report* report);
HBT_API int hbt_report_valid(const hbt_report* report);
HBT_API size_t hbt_report_count(const hbt_report* report);
HBT_API const char* hbt_report_message(const hbt_report* report, size_t index);

/* Photon sources. Mixture components are copied. */
HBT_API hbt_status hbt_source_poissonian(double mean, hbt_source** out);
HBT_API hbt_status hbt_source_thermal(double mean, hbt_source** out);
HBT_API hbt_status hbt_source_finite(const double* probabilities, size_t count, hbt_source** out);
HBT_API hbt_status hbt_source_fock(int photons, hbt_source** out);
HBT_API hbt_status hbt_source_mixture(const double* weights, const hbt_source* const* components, size_t count,
                                      hbt_source** out);
HBT_API void hbt_source_destroy(hbt_source* source);
HBT_API hbt_status hbt_source_mean(const hbt_source* source, double* out);
HBT_API hbt_status hbt_source_probability(const hbt_source* source, int n, double* out);
HBT_API hbt_status hbt_factorial_moment(const hbt_source* source, int r, double* out);
HBT_API hbt_status hbt_normalized_moment(const hbt_source* source, int r, double* out);

/* Coincidence model. Vectors have D+1 entries, index 0 being 1. */
HBT_API hbt_status hbt_c_obs_analytic(const hbt_setup* setup, const hbt_source* source, double* out,
                                      size_t capacity);
HBT_API hbt_status hbt_c_nr(const hbt_setup* setup, int n, int r, double* out);
/* Row-major (D+1)x(D+1) matrix C (basis S) or C' (basis S'), entry (r, n) = c_{n,r}. */
HBT_API hbt_status hbt_coincidence_matrix(const hbt_setup* setup, hbt_basis basis, double* out, size_t capacity);
/* Row-major reciprocal basis, row i = d_i (last row of S' is d_inf). */
HBT_API hbt_status hbt_reciprocal_basis(const hbt_setup* setup, hbt_basis basis, double* out, size_t capacity,
                                        double* residual);

/* Monte Carlo and measured counts. Subset counts are indexed by detector mask. */
HBT_API hbt_status hbt_simulate(const hbt_setup* setup, const hbt_source* source, uint64_t pulses, uint64_t seed,
                                unsigned workers, hbt_simulation** out);
HBT_API hbt_status hbt_simulation_from_counts(int detectors, const uint64_t* subset_counts, size_t count,
                                              uint64_t pulses, hbt_simulation** out);
HBT_API void hbt_simulation_destroy(hbt_simulation* sim);
HBT_API int hbt_simulation_detectors(const hbt_simulation* sim);
HBT_API uint64_t hbt_simulation_pulses(const hbt_simulation* sim);
HBT_API hbt_status hbt_simulation_subset_counts(const hbt_simulation* sim, uint64_t* out, size_t capacity);
HBT_API hbt_status hbt_simulation_coincidences(const hbt_simulation* sim, double* out, size_t capacity);
HBT_API hbt_status hbt_simulation_standard_errors(const hbt_simulation* sim, double* out, size_t capacity);
HBT_API hbt_status hbt_model_standard_errors(const hbt_setup* setup, const hbt_source* source, uint64_t pulses,
                                             double* out, size_t capacity);

/* Bounds. Entries 0..D-1 bound p_n, entry D bounds p_{>=D}. */
HBT_API hbt_status hbt_bounds_theorem1(const hbt_setup* setup, const double* c_obs, size_t count,
                                       hbt_bounds** out);
HBT_API hbt_status hbt_bounds_closed_form(const hbt_setup* setup, const double* c_obs, size_t count,
                                          hbt_bounds** out);
/* eta has D intervals, c_obs has D+1 (entry 0 = [1, 1]). grid_points <= 0 selects 21. */
HBT_API hbt_status hbt_bounds_worst_case(const hbt_interval* eta, size_t detectors, const hbt_interval* c_obs,
                                         size_t count, hbt_eta_scan scan, int grid_points, hbt_bounds** out);
HBT_API void hbt_bounds_destroy(hbt_bounds* bounds);
HBT_API int hbt_bounds_detectors(const hbt_bounds* bounds);
HBT_API hbt_status hbt_bounds_get(const hbt_bounds* bounds, hbt_bound_field field, double* out, size_t capacity);
HBT_API hbt_status hbt_bounds_basis(const hbt_bounds* bounds, int upper, hbt_basis* out, size_t capacity);
HBT_API size_t hbt_bounds_skipped_count(const hbt_bounds* bounds);
HBT_API const char* hbt_bounds_skipped_message(const hbt_bounds* bounds, size_t index);
/* Needs bounds from hbt_bounds_theorem1. */
HBT_API hbt_status hbt_bounds_certificate(const hbt_setup* setup, const double* c_obs, size_t count,
                                          const hbt_bounds* bounds, hbt_certificate* out);

/* Diagnostics. */
HBT_API hbt_status hbt_optimality_precheck(const hbt_source* source, int detectors, hbt_precheck* out);
/* gaps is row-major (eta_count x D); exponents has D entries. */
HBT_API hbt_status hbt_eta_scaling(const hbt_source* source, int detectors, const double* etas, size_t eta_count,
                                   double* gaps, size_t gaps_capacity, double* exponents,
                                   size_t exponents_capacity);

/* Uncertainty. */
HBT_API hbt_status hbt_confidence_intervals(int detectors, const uint64_t* subset_clicks, size_t count,
                                            uint64_t pulses, double delta, hbt_interval* out, size_t capacity);
/* relative_c has D+1 entries (index 0 ignored); out has D entries. */
HBT_API hbt_status hbt_propagation_estimate(const hbt_setup* setup, const double* c_obs, size_t count,
                                            const double* relative_c, double relative_eta, double* out,
                                            size_t capacity, int* weak_regime);

/* Decoy-state key rates. */
HBT_API hbt_protocol_params hbt_protocol_defaults(void);
HBT_API hbt_calibration_config hbt_calibration_defaults(void);
HBT_API const char* hbt_key_mode_name(hbt_key_mode mode);
HBT_API hbt_status hbt_key_mode_parse(const char* name, hbt_key_mode* out);
HBT_API hbt_status hbt_channel_observations(double mu, double mu_prime, double tau, double Y0,
                                            double channel_error, hbt_channel* out);
HBT_API hbt_status hbt_keyrate_evaluate(hbt_key_mode mode, double mu, double tau, const hbt_protocol_params* params,
                                        const hbt_calibration_config* config, hbt_keyrate_point* out);
HBT_API hbt_status hbt_keyrate_optimize(hbt_key_mode mode, double tau, const hbt_protocol_params* params,
                                        const hbt_calibration_config* config, hbt_keyrate_point* out);
/* out receives mode_count * tau_count points, modes outermost. */
HBT_API hbt_status hbt_keyrate_sweep(const hbt_key_mode* modes, size_t mode_count, const double* taus,
                                     size_t tau_count, const hbt_protocol_params* params,
                                     const hbt_calibration_config* config, unsigned workers,
                                     hbt_keyrate_point* out, size_t capacity);

#ifdef __cplusplus
}
#endif

#endif /* HBTCAL_HBTCAL_H */
