#pragma once

#include <complex>

#include <Eigen/Dense>

namespace biham {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Dense square generator h of the linear dynamics i*hbar d/dt psi = h psi.
///
/// Construction checks that the matrix is square, non-empty and finite, so
/// every NhMatrix in flight is a valid generator.
class NhMatrix {
 public:
  explicit NhMatrix(CMatrix entries);

  [[nodiscard]] Eigen::Index size() const noexcept { return entries_.rows(); }
  [[nodiscard]] const CMatrix& matrix() const noexcept { return entries_; }

  /// Largest singular value.
  [[nodiscard]] double operator_norm() const;
  [[nodiscard]] bool is_hermitian(double tol = 0.0) const;
  [[nodiscard]] NhMatrix adjoint() const { return NhMatrix(entries_.adjoint()); }

 private:
  CMatrix entries_;
};

/// Right state |psi> together with its conjugate row <phibar| at time t.
///
/// Canonical reading: q_k = i*hbar*psi_k, p_k = phibar_k. phibar is stored
/// as the list of its components (no implicit conjugation anywhere).
struct StatePair {
  CVector psi;
  CVector phibar;
  double t = 0.0;
  double hbar = 1.0;

  [[nodiscard]] Eigen::Index size() const noexcept { return psi.size(); }
};

/// Modal coordinates c_j = <b_j|psi>, cbar_j = <phibar|a_j> and the modal
/// constants |C_j|^2.
struct ModalCoordinates {
  CVector c;
  CVector cbar;
  RVector csq;
};

}  // namespace biham
