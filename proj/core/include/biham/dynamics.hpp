#pragma once

#include <functional>
#include <optional>

#include "biham/spectral.hpp"
#include "biham/types.hpp"

namespace biham {

/// Modal constants with |csq_j| above this but |<b_j|psi>| at or below it
/// cannot be realized by a conjugate field.
inline constexpr double kModalZeroTol = 1e-12;

/// c_j = <b_j|psi>.
[[nodiscard]] CVector expand_state(const BiorthogonalSystem& sys, const CVector& psi);

/// Sum_j c_j a_j.
[[nodiscard]] CVector reconstruct_state(const BiorthogonalSystem& sys, const CVector& c);

/// |c_j|^2, the modal constants that give |cbar_j| = |c_j|. Modes with
/// |c_j| <= 1e-12 get 0.
[[nodiscard]] RVector default_modal_constants(const BiorthogonalSystem& sys, const CVector& psi);

/// <phibar| = Sum_j (csq_j / c_j) <b_j|, returned as its component list.
/// Modes with csq_j == 0 are absent from phibar.
///
/// Throws Error{ZeroModalCoefficient} if csq_j > 0 while |<b_j|psi>| <= 1e-12.
[[nodiscard]] CVector conjugate_field(const BiorthogonalSystem& sys, const CVector& psi,
                                      const RVector& csq);

/// Builds (psi, phibar) with phibar from conjugate_field; csq defaults to
/// default_modal_constants(sys, psi).
[[nodiscard]] StatePair make_state_pair(const BiorthogonalSystem& sys, const CVector& psi,
                                        const std::optional<RVector>& csq = std::nullopt,
                                        double hbar = 1.0);

/// Projects a state onto the modes: c_j = <b_j|psi>, cbar_j = <phibar|a_j>,
/// csq_j = Re(cbar_j c_j).
[[nodiscard]] ModalCoordinates modal_coordinates(const BiorthogonalSystem& sys,
                                                 const StatePair& state);

/// Sum_k phibar_k psi_k (bilinear, no conjugation).
[[nodiscard]] Complex overlap(const StatePair& state);

/// <psi|psi>.
[[nodiscard]] double right_norm(const StatePair& state);

struct StateDerivative {
  CVector dpsi;
  CVector dphibar;
};

/// dpsi/dt = -(i/hbar) h psi and dphibar/dt = +(i/hbar) phibar h.
[[nodiscard]] StateDerivative schrodinger_rhs(const CMatrix& h, const StatePair& state);

/// Propagates in the eigenbasis: c_j(t) = c_j(0) e^{-i E_j t/hbar},
/// cbar_j(t) = cbar_j(0) e^{+i E_j t/hbar}. `t` is the elapsed time; the
/// returned state carries state0.t + t.
[[nodiscard]] StatePair evolve_exact(const BiorthogonalSystem& sys, const StatePair& state0,
                                     double t);

/// One classical RK4 step of the coupled (psi, phibar) system for a generator
/// that may vary in time: h_start, h_mid and h_end are h(t), h(t+dt/2) and
/// h(t+dt).
[[nodiscard]] StatePair rk4_step(const CMatrix& h_start, const CMatrix& h_mid,
                                 const CMatrix& h_end, const StatePair& state, double dt);

/// Stability guard: dt * ||h|| / hbar must not exceed this.
inline constexpr double kMaxStepNorm = 0.5;

/// Called with the state after every `every`-th step (and with the initial
/// state before the first step).
using StateObserver = std::function<void(const StatePair&)>;

/// Fixed-step RK4 integration of the coupled dynamics for `steps` steps.
///
/// Throws Error{StepTooLarge} if dt * ||h|| / hbar > 0.5 and Error{NonFinite}
/// if the state overflows.
[[nodiscard]] StatePair evolve_rk4(const NhMatrix& h, const StatePair& state0, double dt,
                                   long steps, const StateObserver& observe = {},
                                   long every = 1);

}  // namespace biham
