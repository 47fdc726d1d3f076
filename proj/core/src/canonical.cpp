#include "biham/canonical.hpp"

#include <algorithm>

#include "biham/errors.hpp"

namespace biham {
namespace {

double max_component_gap(const CVector& a, const CVector& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

void require_match(const NhMatrix& h, const StatePair& s) {
  if (s.psi.size() != h.size() || s.phibar.size() != h.size()) {
    throw Error(ErrorCode::InvalidArgument, "state dimension does not match generator");
  }
}

}  // namespace

Complex hamiltonian_value(const NhMatrix& h, const StatePair& state) {
  require_match(h, state);
  return state.phibar.transpose() * h.matrix() * state.psi;
}

Complex modal_hamiltonian(const BiorthogonalSystem& sys, const ModalCoordinates& modal) {
  Complex sum{0.0, 0.0};
  for (Eigen::Index j = 0; j < sys.eigenvalues.size(); ++j) {
    sum += sys.eigenvalues(j) * modal.cbar(j) * modal.c(j);
  }
  return sum;
}

HamiltonianGradient hamiltonian_gradient(const NhMatrix& h, const StatePair& state) {
  require_match(h, state);
  const Complex q_scale = kI * state.hbar;
  return {h.matrix() * state.psi, (h.matrix().transpose() * state.phibar) / q_scale};
}

StateDerivative canonical_rhs(const NhMatrix& h, const StatePair& state) {
  const HamiltonianGradient g = hamiltonian_gradient(h, state);
  const Complex q_scale = kI * state.hbar;
  return {g.d_phibar / q_scale, -g.d_q};
}

Complex lagrangian_value(const NhMatrix& h, const StatePair& state, const CVector& psidot) {
  require_match(h, state);
  if (psidot.size() != h.size()) {
    throw Error(ErrorCode::InvalidArgument, "psidot dimension does not match generator");
  }
  const Complex kinetic = kI * state.hbar * Complex(state.phibar.transpose() * psidot);
  return kinetic - hamiltonian_value(h, state);
}

double finite_difference_mismatch(const NhMatrix& h, const StatePair& state, double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "fd step must be positive");
  const HamiltonianGradient g = hamiltonian_gradient(h, state);
  const Complex q_scale = kI * state.hbar;
  const double scale =
      std::max({g.d_phibar.cwiseAbs().maxCoeff(), g.d_q.cwiseAbs().maxCoeff(), 1e-300});

  double worst = 0.0;
  for (Eigen::Index k = 0; k < state.size(); ++k) {
    for (const Complex dir : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
      const Complex delta = step * dir;

      StatePair plus = state;
      StatePair minus = state;
      plus.phibar(k) += delta;
      minus.phibar(k) -= delta;
      const Complex fd_phibar =
          (hamiltonian_value(h, plus) - hamiltonian_value(h, minus)) / (2.0 * delta);
      worst = std::max(worst, std::abs(fd_phibar - g.d_phibar(k)) / scale);

      // Shifting q_k by delta shifts psi_k by delta / (i hbar).
      plus = state;
      minus = state;
      plus.psi(k) += delta / q_scale;
      minus.psi(k) -= delta / q_scale;
      const Complex fd_q = (hamiltonian_value(h, plus) - hamiltonian_value(h, minus)) / (2.0 * delta);
      worst = std::max(worst, std::abs(fd_q - g.d_q(k)) / scale);
    }
  }
  return worst;
}

CanonicalReport verify_canonical(const NhMatrix& h, const BiorthogonalSystem& sys,
                                 const StatePair& state, double fd_step) {
  CanonicalReport report;
  report.hamiltonian_value = hamiltonian_value(h, state);
  report.modal_value = modal_hamiltonian(sys, modal_coordinates(sys, state));

  const StateDerivative canon = canonical_rhs(h, state);
  const StateDerivative direct = schrodinger_rhs(h.matrix(), state);
  report.rhs_mismatch = std::max(max_component_gap(canon.dpsi, direct.dpsi),
                                 max_component_gap(canon.dphibar, direct.dphibar));
  report.grad_mismatch = finite_difference_mismatch(h, state, fd_step);
  return report;
}

}  // namespace biham
