// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#include "hbtcal/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hbtcal/error.hpp"

namespace hbtcal {

const char* to_string(Basis basis) noexcept { return basis == Basis::S ? "S" : "S'"; }

namespace {

CoincidenceMatrix build_matrix(const DetectorSetup& setup, Basis kind) {
  require_valid(setup);
  const int d = setup.detectors();
  CoincidenceMatrix m;
  m.kind = kind;
  m.entries = SquareMatrix(d + 1);
  m.scaled = SquareMatrix(d + 1);
  m.row_scale.resize(static_cast<std::size_t>(d) + 1);
  for (int n = 0; n <= d; ++n) {
    if (kind == Basis::SPrime && n == d) {
      for (int r = 0; r <= d; ++r) m.entries(r, n) = 1.0;
      continue;
    }
    const auto column = coincidence_column(setup, n);
    for (int r = 0; r <= d; ++r) m.entries(r, n) = column[static_cast<std::size_t>(r)];
  }
  for (int r = 0; r <= d; ++r) m.row_scale[static_cast<std::size_t>(r)] = diagonal_coincidence(setup, r);
  m.col_scale.assign(static_cast<std::size_t>(d) + 1, 1.0);
  // The all-ones column c_inf is scaled down to O(1) relative to row D.
  if (kind == Basis::SPrime) m.col_scale.back() = m.row_scale.back();
  for (int r = 0; r <= d; ++r) {
    for (int n = 0; n <= d; ++n) {
      m.scaled(r, n) = m.entries(r, n) * m.col_scale[static_cast<std::size_t>(n)] / m.row_scale[static_cast<std::size_t>(r)];
    }
  }
  return m;
}

}  // namespace

CoincidenceMatrix build_C(const DetectorSetup& setup) { return build_matrix(setup, Basis::S); }
CoincidenceMatrix build_C_prime(const DetectorSetup& setup) { return build_matrix(setup, Basis::SPrime); }

ReciprocalBasis reciprocal_basis(const CoincidenceMatrix& matrix) {
  const SquareMatrix& u = matrix.scaled;
  const int size = u.size();
  require(size >= 2, ErrorCode::invalid_argument, "coincidence matrix is empty");
  for (int r = 1; r < size; ++r) {
    for (int c = 0; c < r; ++c) {
      require(u(r, c) == 0.0, ErrorCode::invalid_argument, "coincidence matrix is not upper triangular");
    }
  }

  // Columns of the inverse by back-substitution: U x = e_j.
  SquareMatrix inverse(size);
  for (int j = 0; j < size; ++j) {
    for (int i = j; i >= 0; --i) {
      double sum = (i == j) ? 1.0 : 0.0;
      for (int k = i + 1; k <= j; ++k) sum -= u(i, k) * inverse(k, j);
      inverse(i, j) = sum / u(i, i);
    }
  }

  ReciprocalBasis basis;
  basis.kind = matrix.kind;
  basis.row_scale = matrix.row_scale;
  basis.rows.assign(static_cast<std::size_t>(size), std::vector<double>(static_cast<std::size_t>(size), 0.0));
  basis.scaled_rows = basis.rows;
  for (int i = 0; i < size; ++i) {
    for (int r = 0; r < size; ++r) {
      const double v = inverse(i, r) * matrix.col_scale[static_cast<std::size_t>(i)];
      basis.scaled_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)] = v;
      basis.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)] = v / matrix.row_scale[static_cast<std::size_t>(r)];
    }
    basis.labels.push_back((matrix.kind == Basis::SPrime && i == size - 1) ? "inf" : std::to_string(i));
  }

  // d_i . c_j - delta_ij, measured in the scaled coordinates.
  for (int i = 0; i < size; ++i) {
    double row_residual = 0.0;
    for (int j = 0; j < size; ++j) {
      double dot = 0.0;
      for (int r = 0; r < size; ++r) dot += inverse(i, r) * u(r, j);
      row_residual = std::max(row_residual, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
    if (!(row_residual <= kBiorthogonalityTolerance)) {
      fail(ErrorCode::numerical_conditioning, "reciprocal basis " + std::string(to_string(matrix.kind)) + " row " +
                                                  basis.labels[static_cast<std::size_t>(i)] + " residual " + std::to_string(row_residual) +
                                                  " exceeds 1e-10");
    }
    basis.residual = std::max(basis.residual, row_residual);
  }
  return basis;
}

double ReciprocalBasis::project(int i, const CoincidenceVector& c_obs) const {
  const auto& row = scaled_rows.at(static_cast<std::size_t>(i));
  require(c_obs.entries().size() == row.size(), ErrorCode::invalid_argument,
          "coincidence vector length does not match the basis");
  double sum = 0.0;
  for (std::size_t r = 0; r < row.size(); ++r) sum += row[r] * (c_obs.entries()[r] / row_scale[r]);
  return sum;
}

void BoundsResult::clamp() {
  lower.resize(lower_raw.size());
  upper.resize(upper_raw.size());
  for (std::size_t n = 0; n < lower_raw.size(); ++n) {
    lower[n] = std::clamp(lower_raw[n], 0.0, 1.0);
    upper[n] = std::clamp(upper_raw[n], 0.0, 1.0);
  }
}

Basis upper_basis_for(int detectors, int n) noexcept {
  return (detectors - n) % 2 == 0 ? Basis::S : Basis::SPrime;
}

Basis lower_basis_for(int detectors, int n) noexcept {
  return (detectors - n) % 2 == 0 ? Basis::SPrime : Basis::S;
}

BoundsEngine::BoundsEngine(const DetectorSetup& setup)
    : detectors_(setup.detectors()),
      s_(reciprocal_basis(build_C(setup))),
      s_prime_(reciprocal_basis(build_C_prime(setup))) {}

const std::vector<double>& BoundsEngine::upper_row(int n) const {
  require(n >= 0 && n <= detectors_, ErrorCode::invalid_argument, "bound index outside 0..D");
  if (n == detectors_) return s_.rows.back();
  const auto& b = upper_basis_for(detectors_, n) == Basis::S ? s_ : s_prime_;
  return b.rows[static_cast<std::size_t>(n)];
}

const std::vector<double>& BoundsEngine::lower_row(int n) const {
  require(n >= 0 && n <= detectors_, ErrorCode::invalid_argument, "bound index outside 0..D");
  if (n == detectors_) return s_prime_.rows.back();
  const auto& b = lower_basis_for(detectors_, n) == Basis::S ? s_ : s_prime_;
  return b.rows[static_cast<std::size_t>(n)];
}

BoundsResult BoundsEngine::bounds(const CoincidenceVector& c_obs) const {
  require(c_obs.detectors() == detectors_, ErrorCode::invalid_argument,
          "coincidence vector has " + std::to_string(c_obs.detectors()) + " folds, setup has " +
              std::to_string(detectors_) + " detectors");
  const int d = detectors_;
  BoundsResult out;
  out.detectors = d;
  const auto size = static_cast<std::size_t>(d) + 1;
  out.s_projection.resize(size);
  out.s_prime_projection.resize(size);
  for (int n = 0; n <= d; ++n) {
    out.s_projection[static_cast<std::size_t>(n)] = s_.project(n, c_obs);
    out.s_prime_projection[static_cast<std::size_t>(n)] = s_prime_.project(n, c_obs);
  }
  out.lower_raw.resize(size);
  out.upper_raw.resize(size);
  out.lower_basis.resize(size);
  out.upper_basis.resize(size);
  for (int n = 0; n < d; ++n) {
    const auto i = static_cast<std::size_t>(n);
    out.upper_basis[i] = upper_basis_for(d, n);
    out.lower_basis[i] = lower_basis_for(d, n);
    out.upper_raw[i] = out.upper_basis[i] == Basis::S ? out.s_projection[i] : out.s_prime_projection[i];
    out.lower_raw[i] = out.lower_basis[i] == Basis::S ? out.s_projection[i] : out.s_prime_projection[i];
  }
  const auto tail = static_cast<std::size_t>(d);
  out.upper_basis[tail] = Basis::S;
  out.lower_basis[tail] = Basis::SPrime;
  out.upper_raw[tail] = out.s_projection[tail];
  out.lower_raw[tail] = out.s_prime_projection[tail];
  out.clamp();
  return out;
}

BoundsResult theorem1_bounds(const DetectorSetup& setup, const CoincidenceVector& c_obs) {
  return BoundsEngine(setup).bounds(c_obs);
}

OptimalityCertificate optimality_certificate(const DetectorSetup& setup, const CoincidenceVector& c_obs,
                                             const BoundsResult& bounds) {
  const int d = setup.detectors();
  require(bounds.detectors == d && c_obs.detectors() == d, ErrorCode::invalid_argument,
          "bounds, coincidences and setup disagree on the detector count");
  require(bounds.s_projection.size() == static_cast<std::size_t>(d) + 1 &&
              bounds.s_prime_projection.size() == static_cast<std::size_t>(d) + 1,
          ErrorCode::invalid_argument, "certificate needs projection-based bounds");

  std::vector<double> diag(static_cast<std::size_t>(d) + 1);
  for (int r = 0; r <= d; ++r) diag[static_cast<std::size_t>(r)] = diagonal_coincidence(setup, r);
  auto residual_of = [&](const std::vector<double>& rec) {
    double worst = 0.0;
    for (int r = 0; r <= d; ++r) {
      const auto i = static_cast<std::size_t>(r);
      worst = std::max(worst, std::abs(rec[i] - c_obs[r]) / diag[i]);
    }
    return worst;
  };
  auto nonnegative = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x >= -kNonnegativitySlack; });
  };

  OptimalityCertificate cert;
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  cert.s_residual = nan;
  cert.s_prime_residual = nan;

  cert.s_nonnegative = nonnegative(bounds.s_projection);
  if (cert.s_nonnegative) {
    cert.saturating_distribution = bounds.s_projection;
    for (double& p : cert.saturating_distribution) p = std::max(p, 0.0);
    cert.s_residual = residual_of(coincidences_of_weights(setup, cert.saturating_distribution));
    require(cert.s_residual <= kReconstructionTolerance, ErrorCode::internal_consistency,
            "saturating distribution does not reproduce c_obs (residual " + std::to_string(cert.s_residual) + ")");
    cert.s_tight = true;
  }

  cert.s_prime_nonnegative = nonnegative(bounds.s_prime_projection);
  if (cert.s_prime_nonnegative) {
    cert.s_prime_distribution.assign(bounds.s_prime_projection.begin(), bounds.s_prime_projection.end() - 1);
    for (double& p : cert.s_prime_distribution) p = std::max(p, 0.0);
    cert.tail_mass_at_infinity = std::max(bounds.s_prime_projection.back(), 0.0);
    auto rec = coincidences_of_weights(setup, cert.s_prime_distribution);
    // A photon number going to infinity makes every fold click: c_inf = (1, ..., 1).
    for (double& c : rec) c += cert.tail_mass_at_infinity;
    cert.s_prime_residual = residual_of(rec);
    require(cert.s_prime_residual <= kReconstructionTolerance, ErrorCode::internal_consistency,
            "S' saturating family does not reproduce c_obs (residual " + std::to_string(cert.s_prime_residual) +
                ")");
    cert.s_prime_tight = true;
  }
  return cert;
}

}  // namespace hbtcal
