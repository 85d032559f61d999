// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
//
// Explicit bound polynomials for D = 2, 3, 4 in terms of the normalized
// coincidences t_r = c_obs,r / c_{r,r}, the mean efficiency e and the
// deviations xi_{i,j} (all zero for uniform efficiencies).
#include <array>
#include <cmath>

#include "hbtcal/bounds.hpp"
#include "hbtcal/error.hpp"

namespace hbtcal {

namespace {

struct Normalized {
  std::array<double, 5> t{};
  double e = 0.0;
  double x21 = 0.0, x31 = 0.0, x32 = 0.0, x41 = 0.0, x42 = 0.0, x43 = 0.0;
};

Normalized normalize(const DetectorSetup& setup, const CoincidenceVector& c_obs) {
  const int d = setup.detectors();
  Normalized v;
  v.e = setup.mean_efficiency();
  v.t[0] = 1.0;
  for (int r = 1; r <= d; ++r) v.t[static_cast<std::size_t>(r)] = c_obs[r] / diagonal_coincidence(setup, r);
  v.x21 = xi(setup, 2, 1);
  if (d >= 3) {
    v.x31 = xi(setup, 3, 1);
    v.x32 = xi(setup, 3, 2);
  }
  if (d >= 4) {
    v.x41 = xi(setup, 4, 1);
    v.x42 = xi(setup, 4, 2);
    v.x43 = xi(setup, 4, 3);
  }
  return v;
}

void closed_form_d2(const Normalized& v, BoundsResult& b) {
  const double e = v.e, x21 = v.x21;
  const double t1 = v.t[1], t2 = v.t[2];
  b.lower_raw = {1.0 - t1 + 2.0 * (1.0 + x21) * e * (1.0 - e) * t2,
                 t1 - (2.0 - (1.0 - x21) * e) * t2,
                 2.0 * (1.0 + x21) * e * e * t2};
  b.upper_raw = {1.0 - t1 + (1.0 - (1.0 - x21) * e) * t2,
                 t1 - 2.0 * (1.0 + x21) * e * t2,
                 t2};
}

void closed_form_d3(const Normalized& v, BoundsResult& b) {
  const double e = v.e, x21 = v.x21, x31 = v.x31, x32 = v.x32;
  const double t1 = v.t[1], t2 = v.t[2], t3 = v.t[3];
  const double a2 = 1.0 - (1.0 - 2.0 * x21) * e;
  const double q3 = 2.0 - 4.5 * x32 + 2.0 * x31;
  b.lower_raw = {
      1.0 - t1 + a2 * t2 - (1.0 - (3.0 - 1.5 * x32) * e + q3 * e * e) * t3,
      t1 - (2.0 - (1.0 - 2.0 * x21) * e) * t2 + 3.0 * (1.0 + x32) * e * (2.0 - 3.0 * e) * t3,
      t2 - 3.0 * (1.0 - (1.0 - 0.5 * x32) * e) * t3,
      6.0 * (1.0 + x31) * e * e * e * t3,
  };
  // The t2 coefficient of the p_1 upper bound carries the same xi_{2,1}
  // term as the lower bound; inverting C for unequal efficiencies confirms it.
  b.upper_raw = {
      1.0 - t1 + a2 * t2 - 3.0 * (1.0 + x32) * e * (1.0 - 3.0 * e + 2.0 * (1.0 + x21) * e * e) * t3,
      t1 - (2.0 - (1.0 - 2.0 * x21) * e) * t2 + (3.0 - (6.0 - 3.0 * x32) * e + q3 * e * e) * t3,
      t2 - 3.0 * (1.0 + x32) * e * t3,
      t3,
  };
}

void closed_form_d4(const Normalized& v, BoundsResult& b) {
  const double e = v.e, x21 = v.x21, x31 = v.x31, x32 = v.x32, x41 = v.x41, x42 = v.x42, x43 = v.x43;
  const double t1 = v.t[1], t2 = v.t[2], t3 = v.t[3], t4 = v.t[4];
  const double e2 = e * e, e3 = e2 * e;
  const double a2 = 1.0 - (1.0 - 3.0 * x21) * e;
  const double a3q = 2.0 - 12.0 * x32 + 6.0 * x31;
  const double a3 = 1.0 - (3.0 - 3.0 * x32) * e + a3q * e2;
  const double k2 = 11.0 + 6.0 * x21 - 8.0 * x32 / 3.0 - 12.0 * x43 + 11.0 * x42 / 3.0;
  const double k3 = 24.0 * x21 - 32.0 * x32 / 3.0 - 16.0 * x43 + 44.0 * x42 / 3.0 - 6.0 * x41;
  const double b1_2 = 2.0 - (1.0 - 3.0 * x21) * e;
  const double b1_3 = 3.0 - (6.0 - 6.0 * x32) * e + a3q * e2;
  const double c1 = 1.0 - (1.0 - x32) * e;

  b.lower_raw = {
      1.0 - t1 + a2 * t2 - a3 * t3 +
          4.0 * (1.0 + x43) * e * (1.0 - 6.0 * e + (11.0 + 3.0 * x31) * e2 - 6.0 * (1.0 + x31) * e3) * t4,
      t1 - b1_2 * t2 + b1_3 * t3 -
          (4.0 - (18.0 - 6.0 * x43) * e + (22.0 + 12.0 * x21 - 16.0 * x32 / 3.0 - 24.0 * x43 + 22.0 * x42 / 3.0) * e2 -
           (6.0 + k3) * e3) *
              t4,
      t2 - 3.0 * c1 * t3 + 12.0 * (1.0 + x43) * e * (1.0 - 2.0 * e) * t4,
      t3 - (4.0 - 2.0 * (3.0 - x43) * e) * t4,
      24.0 * (1.0 + x41) * e2 * e2 * t4,
  };
  // The eta^3 constant in the p_0 upper bound is 6 (as in the p_1 lower
  // bound); 5 does not reproduce the matrix inverse even for uniform eta.
  b.upper_raw = {
      1.0 - t1 + a2 * t2 - a3 * t3 + (1.0 - (6.0 - 2.0 * x43) * e + k2 * e2 - (6.0 + k3) * e3) * t4,
      t1 - b1_2 * t2 + b1_3 * t3 - 4.0 * (1.0 + x43) * e * (3.0 - 12.0 * e + (11.0 + 3.0 * x31) * e2) * t4,
      t2 - 3.0 * c1 * t3 + (6.0 - (18.0 - 6.0 * x43) * e + k2 * e2) * t4,
      t3 - 4.0 * (1.0 + x43) * e * t4,
      t4,
  };
}

}  // namespace

BoundsResult closedform_bounds(const DetectorSetup& setup, const CoincidenceVector& c_obs) {
  const int d = setup.detectors();
  require(d >= 2 && d <= 4, ErrorCode::unsupported_dimension,
          "closed-form bounds exist for D in {2,3,4}, got D=" + std::to_string(d));
  require_valid(setup);
  require(c_obs.detectors() == d, ErrorCode::invalid_argument, "coincidence vector length does not match setup");

  const Normalized v = normalize(setup, c_obs);
  BoundsResult b;
  b.detectors = d;
  if (d == 2) closed_form_d2(v, b);
  if (d == 3) closed_form_d3(v, b);
  if (d == 4) closed_form_d4(v, b);

  const auto size = static_cast<std::size_t>(d) + 1;
  b.lower_basis.resize(size);
  b.upper_basis.resize(size);
  for (int n = 0; n < d; ++n) {
    b.lower_basis[static_cast<std::size_t>(n)] = lower_basis_for(d, n);
    b.upper_basis[static_cast<std::size_t>(n)] = upper_basis_for(d, n);
  }
  b.lower_basis.back() = Basis::SPrime;
  b.upper_basis.back() = Basis::S;
  b.clamp();
  return b;
}

}  // namespace hbtcal
