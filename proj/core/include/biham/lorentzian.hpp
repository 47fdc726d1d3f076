#pragma once

#include <functional>
#include <vector>

#include "biham/dynamics.hpp"
#include "biham/spectral.hpp"
#include "biham/types.hpp"

namespace biham {

/// Parameters of the two-level Bogoliubov-de Gennes generator
///   h = [[z, x + iy], [-x + iy, -z]].
/// Both eigenvalues are real iff z^2 >= x^2 + y^2.
struct LorentzianParams {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  [[nodiscard]] double discriminant() const noexcept { return z * z - x * x - y * y; }
  [[nodiscard]] bool in_real_regime() const noexcept { return discriminant() >= 0.0; }
};

/// Closed-form eigenpair data. Mode 1 is a_1 = (u, v), mode 2 is
/// a_2 = (v*, u*); left vectors b_1 = (u, -v), b_2 = (-v*, u*).
///
/// `energy` is the eigenvalue of a_1, sgn(z) * sqrt(z^2 - x^2 - y^2); a_2
/// carries -energy.
struct LorentzianEigenpair {
  Complex u;
  Complex v;
  Complex energy;
};

[[nodiscard]] NhMatrix lorentzian_matrix(const LorentzianParams& p);

/// Throws Error{OutsideRealRegime} unless z^2 > x^2 + y^2 and z != 0.
[[nodiscard]] LorentzianEigenpair lorentzian_uv(const LorentzianParams& p);

/// Biorthogonal system assembled from lorentzian_uv, in mode order (1, 2).
/// This is not sorted by eigenvalue.
[[nodiscard]] BiorthogonalSystem lorentzian_system(const LorentzianParams& p);

/// Closed-form conjugate state (phibar_1, phibar_2) for modal constants csq.
/// Throws Error{ZeroModalCoefficient} when csq_j > 0 but <b_j|psi> vanishes.
[[nodiscard]] CVector lorentzian_conjugate(const LorentzianParams& p, const CVector& psi,
                                           const RVector& csq);

/// Parameter path R(s), s in [0, 1], traversed over a duration T.
struct SweepPath {
  std::function<LorentzianParams(double)> at;
  double duration = 1.0;
  /// Number of output intervals; actions are recorded at samples + 1 times.
  long samples = 100;

  [[nodiscard]] static SweepPath linear(const LorentzianParams& start, const LorentzianParams& end,
                                        double duration, long samples = 100);
};

struct ActionRecord {
  std::vector<double> times;
  /// actions[k][j] = hbar * cbar_j(t_k) c_j(t_k).
  std::vector<std::vector<Complex>> actions;
  /// |I_j(t) - I_j(0)| / |I_j(0)|; absolute |I_j(t)| for modes with I_j(0) = 0.
  std::vector<std::vector<double>> deviations;
  std::vector<Complex> overlaps;

  [[nodiscard]] double max_deviation() const;
};

/// Initial pair with c_j = cbar_j = sqrt(csq_j) in the closed-form basis at p.
[[nodiscard]] StatePair lorentzian_initial_state(const LorentzianParams& p, const RVector& csq,
                                                 double hbar = 1.0);

/// Integrates the coupled dynamics under h(R(t/T)) with RK4 and records the
/// actions I_j = hbar cbar_j c_j in the instantaneous eigenbasis. Mode labels
/// start from the closed-form basis (mode 1 = a_1) and are carried forward by
/// maximal eigenvector overlap.
///
/// Throws Error{OutsideRealRegime} if the path leaves the strict real regime,
/// Error{StepTooLarge} or Error{NonFinite} from the integrator.
[[nodiscard]] ActionRecord sweep_adiabatic(const SweepPath& path, const StatePair& state0,
                                           double dt);

}  // namespace biham
