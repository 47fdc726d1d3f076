#pragma once

#include "biham/dynamics.hpp"
#include "biham/spectral.hpp"
#include "biham/types.hpp"

namespace biham {

/// H = <phibar|h|psi> = Sum_jk phibar_j h_jk psi_k.
[[nodiscard]] Complex hamiltonian_value(const NhMatrix& h, const StatePair& state);

/// H = Sum_j E_j cbar_j c_j.
[[nodiscard]] Complex modal_hamiltonian(const BiorthogonalSystem& sys,
                                        const ModalCoordinates& modal);

/// Partial derivatives of the bilinear H, with phibar_k and q_k = i*hbar*psi_k
/// treated as independent coordinates.
struct HamiltonianGradient {
  CVector d_phibar;  ///< dH/dphibar_k = (h psi)_k
  CVector d_q;       ///< dH/dq_k = (phibar h)_k / (i hbar)
};

[[nodiscard]] HamiltonianGradient hamiltonian_gradient(const NhMatrix& h, const StatePair& state);

/// Time derivatives read off Hamilton's equations:
///   d(i hbar psi_k)/dt = dH/dphibar_k,   dphibar_k/dt = -dH/dq_k.
[[nodiscard]] StateDerivative canonical_rhs(const NhMatrix& h, const StatePair& state);

/// L = i hbar <phibar|psidot> - <phibar|h|psi>.
[[nodiscard]] Complex lagrangian_value(const NhMatrix& h, const StatePair& state,
                                       const CVector& psidot);

struct CanonicalReport {
  Complex hamiltonian_value;
  Complex modal_value;
  /// max component gap between canonical_rhs and schrodinger_rhs.
  double rhs_mismatch = 0.0;
  /// max relative gap between analytic partials and central differences.
  double grad_mismatch = 0.0;
};

/// Central-difference gradient of H. Real and imaginary perturbations of
/// each coordinate are evaluated separately; the returned mismatch covers
/// both against the analytic gradient, relative to its largest component.
[[nodiscard]] double finite_difference_mismatch(const NhMatrix& h, const StatePair& state,
                                                double step = 1e-6);

/// Runs every consistency check on one (h, state). `sys` must be the
/// decomposition of h.
[[nodiscard]] CanonicalReport verify_canonical(const NhMatrix& h, const BiorthogonalSystem& sys,
                                               const StatePair& state, double fd_step = 1e-6);

}  // namespace biham
