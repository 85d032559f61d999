// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "hbtcal/coincidence.hpp"

namespace hbtcal {

/// Which index set a basis (and hence a bound) comes from:
/// S = {0..D}, S' = {0..D-1, infinity}.
enum class Basis { S, SPrime };

const char* to_string(Basis basis) noexcept;

/// Dense square matrix, row-major.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int size) : size_(size), data_(static_cast<std::size_t>(size * size), 0.0) {}

  [[nodiscard]] int size() const noexcept { return size_; }
  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * size_ + c)]; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r * size_ + c)]; }

 private:
  int size_ = 0;
  std::vector<double> data_;
};

/// C (columns c_0..c_D) or C' (c_D replaced by c_inf = (1,...,1)).
/// entries(r, n) = c_{n,r}; scaled(r, n) = entries(r, n) col_scale[n] / row_scale[r],
/// with row_scale[r] = c_{r,r} and col_scale = 1 except c_{D,D} on c_inf.
struct CoincidenceMatrix {
  Basis kind = Basis::S;
  SquareMatrix entries;
  SquareMatrix scaled;
  std::vector<double> row_scale;
  std::vector<double> col_scale;
};

CoincidenceMatrix build_C(const DetectorSetup& setup);
CoincidenceMatrix build_C_prime(const DetectorSetup& setup);

/// Rows d_i with c_j . d_i = delta_ij.
struct ReciprocalBasis {
  Basis kind = Basis::S;
  /// rows[i][r], in the original (unscaled) coordinates.
  std::vector<std::vector<double>> rows;
  /// scaled_rows[i][r] with c_obs . d_i = sum_r scaled_rows[i][r] * c_obs,r / row_scale[r].
  std::vector<std::vector<double>> scaled_rows;
  std::vector<double> row_scale;
  std::vector<std::string> labels;
  double residual = 0.0;

  /// c_obs . d_i, evaluated through the normalized coincidences.
  [[nodiscard]] double project(int i, const CoincidenceVector& c_obs) const;
};

inline constexpr double kBiorthogonalityTolerance = 1e-10;
inline constexpr double kIdentityTolerance = 1e-10;
inline constexpr double kNonnegativitySlack = 1e-12;

/// Back-substitution on the row-scaled triangular system. Throws
/// numerical_conditioning when the biorthogonality residual exceeds 1e-10.
ReciprocalBasis reciprocal_basis(const CoincidenceMatrix& matrix);

/// Bounds on p_0..p_{D-1} (indices 0..D-1) and on p_{>=D} (index D).
struct BoundsResult {
  int detectors = 0;
  std::vector<double> lower_raw;
  std::vector<double> upper_raw;
  std::vector<double> lower;  // clamped to [0, 1]
  std::vector<double> upper;  // clamped to [0, 1]
  std::vector<Basis> lower_basis;
  std::vector<Basis> upper_basis;
  /// c_obs . d_n^(S) for n = 0..D; empty when not computed by projection.
  std::vector<double> s_projection;
  /// c_obs . d_n^(S') for n = 0..D-1, then d_inf^(S') at index D.
  std::vector<double> s_prime_projection;

  void clamp();
};

/// Both reciprocal bases for one setup, reusable for many coincidence vectors.
class BoundsEngine {
 public:
  explicit BoundsEngine(const DetectorSetup& setup);

  [[nodiscard]] const ReciprocalBasis& s_basis() const noexcept { return s_; }
  [[nodiscard]] const ReciprocalBasis& s_prime_basis() const noexcept { return s_prime_; }
  [[nodiscard]] int detectors() const noexcept { return detectors_; }

  /// Coefficient row (over r = 0..D, unscaled) of upper (or lower) bound
  /// entry n, n = D meaning the tail.
  [[nodiscard]] const std::vector<double>& upper_row(int n) const;
  [[nodiscard]] const std::vector<double>& lower_row(int n) const;

  [[nodiscard]] BoundsResult bounds(const CoincidenceVector& c_obs) const;

 private:
  int detectors_;
  ReciprocalBasis s_;
  ReciprocalBasis s_prime_;
};

/// Basis used for the upper bound on p_n (n < D): S when D-n is even.
Basis upper_basis_for(int detectors, int n) noexcept;
Basis lower_basis_for(int detectors, int n) noexcept;

/// Linear-algebra bounds. Refuses setups that fail validate_setup.
BoundsResult theorem1_bounds(const DetectorSetup& setup, const CoincidenceVector& c_obs);

/// Explicit polynomial formulas for D in {2, 3, 4}; unsupported_dimension
/// otherwise.
BoundsResult closedform_bounds(const DetectorSetup& setup, const CoincidenceVector& c_obs);

struct OptimalityCertificate {
  bool s_nonnegative = false;
  /// S-related bounds are simultaneously attained by saturating_distribution.
  bool s_tight = false;
  std::vector<double> saturating_distribution;  // p_0..p_D when s_nonnegative
  double s_residual = 0.0;

  bool s_prime_nonnegative = false;
  bool s_prime_tight = false;
  std::vector<double> s_prime_distribution;  // p_0..p_{D-1}
  double tail_mass_at_infinity = 0.0;
  double s_prime_residual = 0.0;
};

inline constexpr double kReconstructionTolerance = 1e-10;

/// Residuals are max_r |c_rec,r - c_obs,r| / c_{r,r}. Throws
/// internal_consistency when a nonnegative family fails to reproduce c_obs.
OptimalityCertificate optimality_certificate(const DetectorSetup& setup, const CoincidenceVector& c_obs,
                                             const BoundsResult& bounds);

}  // namespace hbtcal
