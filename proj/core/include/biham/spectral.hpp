#pragma once

#include "biham/types.hpp"

namespace biham {

/// Biorthogonal eigensystem of a diagonalizable generator.
///
/// Column j of `right` is a_j, column j of `left` is b_j, and
/// <b_i|a_j> = delta_ij. Columns are ordered by ascending (Re E, Im E).
/// A truncated system (fewer columns than rows) is representable; its
/// completeness residual is then of order one.
struct BiorthogonalSystem {
  CVector eigenvalues;
  CMatrix right;
  CMatrix left;
  /// sigma_max / sigma_min of the right eigenvector matrix.
  double cond = 1.0;

  [[nodiscard]] Eigen::Index dimension() const noexcept { return right.rows(); }
  [[nodiscard]] Eigen::Index modes() const noexcept { return right.cols(); }
};

inline constexpr double kDefaultDecomposeTol = 1e-8;

/// Right eigenvectors come from a complex Schur-based solver, are normalized
/// to unit length with their first significant component real and positive,
/// and left eigenvectors are then fixed by B^dagger = A^{-1}.
///
/// Throws Error{NotDiagonalizable} when sigma_min(A) < tol * sigma_max(A), or
/// when the left vectors fail the independent check against h^dagger.
[[nodiscard]] BiorthogonalSystem biorthogonal_decompose(const NhMatrix& h,
                                                        double tol = kDefaultDecomposeTol);

/// max |(B^dagger A - I)_ij|
[[nodiscard]] double biorthonormality_residual(const BiorthogonalSystem& sys);

/// max |(sum_j a_j b_j^dagger - I)_ij|
[[nodiscard]] double completeness_residual(const BiorthogonalSystem& sys);

/// max_j ||h a_j - E_j a_j|| / ||h||, with a_j measured at unit length.
[[nodiscard]] double right_eigen_residual(const NhMatrix& h, const BiorthogonalSystem& sys);

/// max_j ||h^dagger b_j - conj(E_j) b_j|| / ||h||, with b_j at unit length.
/// This is the adjoint-duality check: left eigenvectors of h are right
/// eigenvectors of h^dagger.
[[nodiscard]] double left_eigen_residual(const NhMatrix& h, const BiorthogonalSystem& sys);

/// True iff max_j |Im E_j| <= tol * max_j |E_j| (or <= tol for a zero spectrum).
[[nodiscard]] bool spectrum_is_real(const BiorthogonalSystem& sys, double tol = 1e-10);

/// Reorders the modes of `next` so that mode j is the one whose right
/// eigenvector has the largest normalized overlap with mode j of
/// `reference`. Used to keep labels continuous along parameter sweeps.
[[nodiscard]] BiorthogonalSystem align_modes(const BiorthogonalSystem& reference,
                                             BiorthogonalSystem next);

}  // namespace biham
