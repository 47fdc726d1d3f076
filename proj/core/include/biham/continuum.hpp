#pragma once

#include <span>

#include "biham/dynamics.hpp"
#include "biham/types.hpp"

namespace biham {

/// Periodic 1D lattice x_i = i * dx, i = 0..N-1, dx = L / N.
struct ContinuumConfig {
  double length = 1.0;
  long points = 64;
  double mass = 1.0;
  double hbar = 1.0;

  [[nodiscard]] double dx() const noexcept { return length / static_cast<double>(points); }
  [[nodiscard]] double position(long i) const noexcept { return static_cast<double>(i) * dx(); }

  /// Throws Error{InvalidArgument} unless N >= 8, L > 0 and m > 0.
  void validate() const;
};

struct LatticeField {
  CVector psi;
  CVector phibar;
  CVector potential;
  double t = 0.0;
};

/// h = -(hbar^2 / 2m) D2 + diag(V), with D2 the periodic second central
/// difference. Non-Hermitian whenever Im V != 0.
[[nodiscard]] NhMatrix discretize(const ContinuumConfig& config, const CVector& potential);

/// Q = Sum_i phibar_i psi_i dx.
[[nodiscard]] Complex lattice_charge(const LatticeField& field, double dx);

/// j_i = (i hbar / 2m) (phibar_i (D psi)_i - psi_i (D phibar)_i), D the
/// periodic first central difference.
[[nodiscard]] CVector lattice_current(const LatticeField& field, const ContinuumConfig& config);

/// Sum_i phibar_i (h psi)_i dx.
[[nodiscard]] Complex lattice_hamiltonian(const NhMatrix& h, const LatticeField& field, double dx);

/// (psi, phibar) -> (e^{i alpha} psi, e^{-i alpha} phibar).
[[nodiscard]] LatticeField phase_rotate(const LatticeField& field, double alpha);

/// max over sites and interior snapshots of |d_t(phibar psi) - d_x j|, both
/// derivatives by central differences, with j from lattice_current.
/// Snapshots must be equally spaced.
///
/// Throws Error{InsufficientSnapshots} for fewer than three snapshots.
[[nodiscard]] double continuity_residual(std::span<const LatticeField> snapshots,
                                         const ContinuumConfig& config);

/// exp(-d^2 / (4 sigma^2)) * exp(i k0 d) with d = x - x0 taken as the
/// nearest periodic image, normalized to Sum |psi|^2 dx = 1.
[[nodiscard]] CVector gaussian_packet(const ContinuumConfig& config, double center, double width,
                                      double wavenumber);

/// exp(i 2 pi mode x / L) / sqrt(L).
[[nodiscard]] CVector plane_wave(const ContinuumConfig& config, long mode);

/// (amp_re + i amp_im) * exp(-(x - x0)^2 / (2 w^2)) on the periodic grid.
[[nodiscard]] CVector complex_gaussian_potential(const ContinuumConfig& config, Complex amplitude,
                                                 double center, double width);

/// Pairs psi with its conjugate field from the spectral decomposition of the
/// discretized generator, using csq_j = |c_j|^2.
[[nodiscard]] LatticeField make_lattice_field(const ContinuumConfig& config,
                                              const CVector& potential, const CVector& psi);

[[nodiscard]] StatePair to_state(const LatticeField& field, double hbar);
[[nodiscard]] LatticeField to_field(const StatePair& state, const CVector& potential);

}  // namespace biham
