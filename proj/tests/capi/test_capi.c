/* Copyright 2026 The hbtcal Authors */
/* SPDX-License-Identifier: Apache-2.0 */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "hbtcal/hbtcal.h"

static int failures = 0;

#define CHECK(cond)                                                  \
  do {                                                               \
    if (!(cond)) {                                                   \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                    \
    }                                                                \
  } while (0)

#define CHECK_OK(expr)                                                                   \
  do {                                                                                   \
    hbt_status st_ = (expr);                                                             \
    if (st_ != HBT_OK) {                                                                 \
      fprintf(stderr, "%s:%d: %s -> %s (%s)\n", __FILE__, __LINE__, #expr, hbt_status_name(st_), \
              hbt_last_error());                                                         \
      ++failures;                                                                        \
    }                                                                                    \
  } while (0)

static void test_setup_and_validation(void) {
  const double bad[2] = {0.6, 0.5};
  hbt_setup* setup = NULL;
  hbt_report* report = NULL;
  double eta[4];

  CHECK(strlen(hbt_version()) > 0);
  CHECK(strcmp(hbt_status_name(HBT_OK), "OK") == 0 || strlen(hbt_status_name(HBT_OK)) > 0);

  CHECK_OK(hbt_setup_uniform(4, 0.025, &setup));
  CHECK(hbt_setup_detectors(setup) == 4);
  CHECK(hbt_setup_efficiencies(setup, eta, 2) == HBT_ERR_BUFFER_TOO_SMALL);
  CHECK(strlen(hbt_last_error()) > 0);
  CHECK_OK(hbt_setup_efficiencies(setup, eta, 4));
  CHECK(eta[3] == 0.025);
  CHECK_OK(hbt_setup_validate(setup, &report));
  CHECK(hbt_report_valid(report) == 1);
  CHECK(hbt_report_count(report) == 0);
  hbt_report_destroy(report);
  hbt_setup_destroy(setup);

  setup = NULL;
  CHECK_OK(hbt_setup_create(bad, 2, &setup));
  CHECK_OK(hbt_setup_validate(setup, &report));
  CHECK(hbt_report_valid(report) == 0);
  CHECK(hbt_report_count(report) >= 1);
  CHECK(strstr(hbt_report_message(report, 0), "efficiency-sum") != NULL);
  CHECK(hbt_report_message(report, 99) == NULL);
  hbt_report_destroy(report);
  hbt_setup_destroy(setup);

  CHECK(hbt_setup_uniform(2, 0.1, NULL) == HBT_ERR_NULL_POINTER);
  CHECK(hbt_setup_create(NULL, 0, &setup) != HBT_OK);
  /* Destroy functions accept NULL. */
  hbt_setup_destroy(NULL);
  hbt_source_destroy(NULL);
  hbt_bounds_destroy(NULL);
}

static void test_bounds_pipeline(void) {
  hbt_setup* setup = NULL;
  hbt_source* source = NULL;
  hbt_bounds* bounds = NULL;
  hbt_bounds* closed = NULL;
  hbt_certificate cert;
  double c[5], lo[5], hi[5], lo_cf[5], s_proj[5], total = 0.0, p;
  hbt_basis basis[5];
  int n;

  CHECK_OK(hbt_setup_uniform(4, 0.025, &setup));
  CHECK_OK(hbt_source_poissonian(0.3, &source));
  CHECK_OK(hbt_c_obs_analytic(setup, source, c, 5));
  CHECK(c[0] == 1.0);
  CHECK(fabs(c[1] - (1.0 - exp(-0.3 * 0.025))) < 1e-15);

  CHECK_OK(hbt_bounds_theorem1(setup, c, 5, &bounds));
  CHECK(hbt_bounds_detectors(bounds) == 4);
  CHECK_OK(hbt_bounds_get(bounds, HBT_LOWER_RAW, lo, 5));
  CHECK_OK(hbt_bounds_get(bounds, HBT_UPPER_RAW, hi, 5));
  CHECK_OK(hbt_bounds_get(bounds, HBT_S_PROJECTION, s_proj, 5));
  CHECK(hbt_bounds_get(bounds, HBT_LOWER, lo, 4) == HBT_ERR_BUFFER_TOO_SMALL);
  CHECK_OK(hbt_bounds_basis(bounds, 1, basis, 5));
  CHECK(basis[0] == HBT_BASIS_S && basis[1] == HBT_BASIS_S_PRIME && basis[4] == HBT_BASIS_S);
  for (n = 0; n < 4; ++n) {
    CHECK_OK(hbt_source_probability(source, n, &p));
    CHECK(lo[n] <= p + 1e-12 && p <= hi[n] + 1e-12);
  }
  for (n = 0; n < 5; ++n) total += s_proj[n];
  CHECK(fabs(total - 1.0) < 1e-10);

  CHECK_OK(hbt_bounds_closed_form(setup, c, 5, &closed));
  CHECK_OK(hbt_bounds_get(closed, HBT_LOWER_RAW, lo_cf, 5));
  for (n = 0; n < 5; ++n) CHECK(fabs(lo_cf[n] - lo[n]) <= 1e-10 * fabs(lo[n]) + 1e-16);

  CHECK_OK(hbt_bounds_certificate(setup, c, 5, bounds, &cert));
  CHECK(cert.s_nonnegative && cert.s_tight && cert.s_size == 5);
  CHECK(cert.s_residual < 1e-10);
  CHECK(hbt_bounds_certificate(setup, c, 5, closed, &cert) != HBT_OK);

  c[0] = 0.5;
  CHECK(hbt_bounds_theorem1(setup, c, 5, &bounds) == HBT_ERR_INVALID_ARGUMENT);

  hbt_bounds_destroy(bounds);
  hbt_bounds_destroy(closed);
  hbt_source_destroy(source);
  hbt_setup_destroy(setup);

  CHECK_OK(hbt_setup_uniform(5, 0.01, &setup));
  {
    const double c5[6] = {1.0, 0.01, 0.0, 0.0, 0.0, 0.0};
    CHECK(hbt_bounds_closed_form(setup, c5, 6, &closed) == HBT_ERR_UNSUPPORTED_DIMENSION);
  }
  hbt_setup_destroy(setup);
}

static void test_simulation(void) {
  hbt_setup* setup = NULL;
  hbt_source* source = NULL;
  hbt_simulation* a = NULL;
  hbt_simulation* b = NULL;
  hbt_simulation* from = NULL;
  uint64_t ca[8], cb[8];
  double coinc[4], coinc2[4];
  int m;

  CHECK_OK(hbt_setup_uniform(3, 0.1, &setup));
  CHECK_OK(hbt_source_thermal(0.5, &source));
  CHECK_OK(hbt_simulate(setup, source, 200000, 7, 1, &a));
  CHECK_OK(hbt_simulate(setup, source, 200000, 7, 4, &b));
  CHECK(hbt_simulation_pulses(a) == 200000);
  CHECK_OK(hbt_simulation_subset_counts(a, ca, 8));
  CHECK_OK(hbt_simulation_subset_counts(b, cb, 8));
  for (m = 0; m < 8; ++m) CHECK(ca[m] == cb[m]);
  CHECK_OK(hbt_simulation_coincidences(a, coinc, 4));
  CHECK_OK(hbt_simulation_from_counts(3, ca, 8, 200000, &from));
  CHECK_OK(hbt_simulation_coincidences(from, coinc2, 4));
  for (m = 0; m < 4; ++m) CHECK(coinc[m] == coinc2[m]);
  hbt_simulation_destroy(a);
  hbt_simulation_destroy(b);
  hbt_simulation_destroy(from);
  hbt_source_destroy(source);
  hbt_setup_destroy(setup);
}

static void test_sources_and_diagnostics(void) {
  hbt_source* fock = NULL;
  hbt_source* pois = NULL;
  hbt_source* mix = NULL;
  const hbt_source* parts[2];
  const double weights[2] = {0.25, 0.75};
  hbt_precheck pc;
  double g, mean;

  CHECK_OK(hbt_source_fock(1, &fock));
  CHECK_OK(hbt_normalized_moment(fock, 2, &g));
  CHECK(g == 0.0);
  CHECK_OK(hbt_source_poissonian(0.9, &pois));
  CHECK_OK(hbt_optimality_precheck(pois, 4, &pc));
  CHECK(pc.s.moment_pass == 1);
  parts[0] = fock;
  parts[1] = pois;
  CHECK_OK(hbt_source_mixture(weights, parts, 2, &mix));
  CHECK_OK(hbt_source_mean(mix, &mean));
  CHECK(fabs(mean - (0.25 + 0.75 * 0.9)) < 1e-14);
  CHECK(hbt_factorial_moment(pois, 0, &g) == HBT_ERR_INVALID_ARGUMENT);
  CHECK(hbt_source_poissonian(-1.0, &mix) == HBT_ERR_INVALID_ARGUMENT);
  hbt_source_destroy(mix);
  hbt_source_destroy(fock);
  hbt_source_destroy(pois);
}

static void test_keyrate(void) {
  hbt_protocol_params params = hbt_protocol_defaults();
  hbt_calibration_config cfg = hbt_calibration_defaults();
  hbt_channel ch;
  hbt_keyrate_point pt;
  hbt_key_mode mode;

  CHECK(params.q == 0.8 && params.q_prime == 0.1 && params.Y0 == 1e-8);
  CHECK(cfg.grid_points == 21);
  CHECK_OK(hbt_channel_observations(0.5, 0.05, 0.1, 1e-8, 0.01, &ch));
  CHECK(fabs(ch.Q - 0.0487706) < 1e-7);
  CHECK(hbt_channel_observations(0.5, 0.05, 0.0, 0.0, 0.01, &ch) == HBT_ERR_DEGENERATE_CHANNEL);
  CHECK_OK(hbt_key_mode_parse("D3", &mode));
  CHECK(mode == HBT_MODE_D3);
  CHECK(strcmp(hbt_key_mode_name(HBT_MODE_POISSON_KNOWN), "poisson-known") == 0);
  CHECK(hbt_key_mode_parse("D9", &mode) == HBT_ERR_INVALID_ARGUMENT);
  CHECK_OK(hbt_keyrate_evaluate(HBT_MODE_POISSON_KNOWN, 0.5, 0.1, &params, &cfg, &pt));
  CHECK(pt.R > 0.0 && pt.no_key == 0);
  CHECK_OK(hbt_keyrate_optimize(HBT_MODE_POISSON_KNOWN, 1.0, &params, &cfg, &pt));
  CHECK(pt.R > 0.0 && pt.mu < 1.0);
}

int main(void) {
  test_setup_and_validation();
  test_bounds_pipeline();
  test_simulation();
  test_sources_and_diagnostics();
  test_keyrate();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("all C API checks passed\n");
  return 0;
}
