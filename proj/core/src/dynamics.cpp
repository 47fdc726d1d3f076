#include "biham/dynamics.hpp"

#include <cmath>
#include <string>

#include "biham/errors.hpp"

namespace biham {
namespace {

void require_same_size(const BiorthogonalSystem& sys, const CVector& v, const char* what) {
  if (v.size() != sys.dimension()) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + " has dimension " + std::to_string(v.size()) +
                    ", expected " + std::to_string(sys.dimension()));
  }
}

void require_pair(const StatePair& s) {
  if (s.psi.size() != s.phibar.size()) {
    throw Error(ErrorCode::InvalidArgument, "psi and phibar differ in dimension");
  }
  if (!(s.hbar > 0.0)) throw Error(ErrorCode::InvalidArgument, "hbar must be positive");
}

}  // namespace

CVector expand_state(const BiorthogonalSystem& sys, const CVector& psi) {
  require_same_size(sys, psi, "psi");
  return sys.left.adjoint() * psi;
}

CVector reconstruct_state(const BiorthogonalSystem& sys, const CVector& c) {
  return sys.right * c;
}

RVector default_modal_constants(const BiorthogonalSystem& sys, const CVector& psi) {
  const CVector c = expand_state(sys, psi);
  RVector csq(c.size());
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    csq(j) = std::abs(c(j)) > kModalZeroTol ? std::norm(c(j)) : 0.0;
  }
  return csq;
}

CVector conjugate_field(const BiorthogonalSystem& sys, const CVector& psi, const RVector& csq) {
  const CVector c = expand_state(sys, psi);
  if (csq.size() != sys.modes()) {
    throw Error(ErrorCode::InvalidArgument, "csq must have one entry per mode");
  }
  CVector phibar = CVector::Zero(sys.dimension());
  for (Eigen::Index j = 0; j < sys.modes(); ++j) {
    if (csq(j) < 0.0 || !std::isfinite(csq(j))) {
      throw Error(ErrorCode::InvalidArgument, "modal constants must be finite and non-negative");
    }
    if (csq(j) == 0.0) continue;
    if (std::abs(c(j)) <= kModalZeroTol) {
      throw Error(ErrorCode::ZeroModalCoefficient,
                  "mode " + std::to_string(j) + " requested with |C|^2 = " +
                      std::to_string(csq(j)) + " but <b_j|psi> vanishes");
    }
    // <b_j| has components conj(b_j).
    phibar += (csq(j) / c(j)) * sys.left.col(j).conjugate();
  }
  return phibar;
}

StatePair make_state_pair(const BiorthogonalSystem& sys, const CVector& psi,
                          const std::optional<RVector>& csq, double hbar) {
  StatePair s;
  s.psi = psi;
  s.phibar = conjugate_field(sys, psi, csq ? *csq : default_modal_constants(sys, psi));
  s.hbar = hbar;
  return s;
}

ModalCoordinates modal_coordinates(const BiorthogonalSystem& sys, const StatePair& state) {
  require_pair(state);
  ModalCoordinates m;
  m.c = expand_state(sys, state.psi);
  m.cbar = sys.right.transpose() * state.phibar;
  m.csq = m.cbar.cwiseProduct(m.c).real();
  return m;
}

Complex overlap(const StatePair& state) {
  require_pair(state);
  return state.phibar.transpose() * state.psi;
}

double right_norm(const StatePair& state) { return state.psi.squaredNorm(); }

StateDerivative schrodinger_rhs(const CMatrix& h, const StatePair& state) {
  const Complex factor = kI / state.hbar;
  return {-factor * (h * state.psi), factor * (h.transpose() * state.phibar)};
}

StatePair evolve_exact(const BiorthogonalSystem& sys, const StatePair& state0, double t) {
  require_pair(state0);
  const ModalCoordinates m0 = modal_coordinates(sys, state0);
  CVector c = m0.c;
  CVector cbar = m0.cbar;
  for (Eigen::Index j = 0; j < sys.modes(); ++j) {
    const Complex phase = -kI * sys.eigenvalues(j) * t / state0.hbar;
    c(j) *= std::exp(phase);
    cbar(j) *= std::exp(-phase);
  }
  StatePair out;
  out.psi = sys.right * c;
  out.phibar = sys.left.conjugate() * cbar;
  out.t = state0.t + t;
  out.hbar = state0.hbar;
  return out;
}

StatePair rk4_step(const CMatrix& h_start, const CMatrix& h_mid, const CMatrix& h_end,
                   const StatePair& state, double dt) {
  auto shifted = [&](const StateDerivative& k, double scale) {
    StatePair s = state;
    s.psi += scale * k.dpsi;
    s.phibar += scale * k.dphibar;
    return s;
  };
  const StateDerivative k1 = schrodinger_rhs(h_start, state);
  const StateDerivative k2 = schrodinger_rhs(h_mid, shifted(k1, 0.5 * dt));
  const StateDerivative k3 = schrodinger_rhs(h_mid, shifted(k2, 0.5 * dt));
  const StateDerivative k4 = schrodinger_rhs(h_end, shifted(k3, dt));

  StatePair out = state;
  out.psi += (dt / 6.0) * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi);
  out.phibar += (dt / 6.0) * (k1.dphibar + 2.0 * k2.dphibar + 2.0 * k3.dphibar + k4.dphibar);
  out.t = state.t + dt;
  return out;
}

StatePair evolve_rk4(const NhMatrix& h, const StatePair& state0, double dt, long steps,
                     const StateObserver& observe, long every) {
  require_pair(state0);
  if (state0.psi.size() != h.size()) {
    throw Error(ErrorCode::InvalidArgument, "state dimension does not match generator");
  }
  if (!(dt > 0.0) || steps < 0 || every < 1) {
    throw Error(ErrorCode::InvalidArgument, "dt must be positive, steps non-negative, every >= 1");
  }
  const double step_norm = dt * h.operator_norm() / state0.hbar;
  if (step_norm > kMaxStepNorm) {
    throw Error(ErrorCode::StepTooLarge, "dt*||h||/hbar = " + std::to_string(step_norm) +
                                             " exceeds " + std::to_string(kMaxStepNorm));
  }

  const CMatrix& m = h.matrix();
  StatePair state = state0;
  if (observe) observe(state);
  for (long step = 1; step <= steps; ++step) {
    state = rk4_step(m, m, m, state, dt);
    // Keep t exact rather than accumulating dt.
    state.t = state0.t + static_cast<double>(step) * dt;
    if (!state.psi.allFinite() || !state.phibar.allFinite()) {
      throw Error(ErrorCode::NonFinite, "state overflowed at t = " + std::to_string(state.t));
    }
    if (observe && step % every == 0) observe(state);
  }
  return state;
}

}  // namespace biham
