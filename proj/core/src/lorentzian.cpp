#include "biham/lorentzian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "biham/errors.hpp"

namespace biham {
namespace {

std::string describe(const LorentzianParams& p) {
  return "(x, y, z) = (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ", " +
         std::to_string(p.z) + ")";
}

void require_strict_regime(const LorentzianParams& p) {
  if (!(p.discriminant() > 0.0) || p.z == 0.0) {
    throw Error(ErrorCode::OutsideRealRegime,
                describe(p) + " is not in the strict real-spectrum regime z^2 > x^2 + y^2");
  }
}

}  // namespace

NhMatrix lorentzian_matrix(const LorentzianParams& p) {
  CMatrix h(2, 2);
  h << Complex(p.z, 0.0), Complex(p.x, p.y), Complex(-p.x, p.y), Complex(-p.z, 0.0);
  return NhMatrix(std::move(h));
}

LorentzianEigenpair lorentzian_uv(const LorentzianParams& p) {
  require_strict_regime(p);
  const double root = std::sqrt(p.discriminant());
  const double abs_z = std::abs(p.z);
  const double sign_z = p.z > 0.0 ? 1.0 : -1.0;
  // (|z| + r)^2 - x^2 - y^2, rewritten to avoid cancellation near the
  // exceptional surface.
  const double denom = std::sqrt(2.0 * root * (abs_z + root));

  LorentzianEigenpair pair;
  pair.u = Complex(-sign_z * (root + abs_z) / denom, 0.0);
  pair.v = Complex(p.x, -p.y) / denom;
  pair.energy = Complex(sign_z * root, 0.0);
  return pair;
}

BiorthogonalSystem lorentzian_system(const LorentzianParams& p) {
  const LorentzianEigenpair e = lorentzian_uv(p);
  BiorthogonalSystem sys;
  sys.eigenvalues.resize(2);
  sys.eigenvalues << e.energy, -e.energy;
  sys.right.resize(2, 2);
  sys.right << e.u, std::conj(e.v), e.v, std::conj(e.u);
  sys.left.resize(2, 2);
  sys.left << e.u, -std::conj(e.v), -e.v, std::conj(e.u);
  Eigen::JacobiSVD<CMatrix> svd(sys.right);
  sys.cond = svd.singularValues()(0) / svd.singularValues()(1);
  return sys;
}

CVector lorentzian_conjugate(const LorentzianParams& p, const CVector& psi, const RVector& csq) {
  if (psi.size() != 2 || csq.size() != 2) {
    throw Error(ErrorCode::InvalidArgument, "two-level model needs 2-component psi and csq");
  }
  const LorentzianEigenpair e = lorentzian_uv(p);
  const Complex u = e.u;
  const Complex v = e.v;
  const Complex b1_psi = std::conj(u) * psi(0) - std::conj(v) * psi(1);
  const Complex b2_psi = -v * psi(0) + u * psi(1);

  CVector phibar = CVector::Zero(2);
  if (csq(0) > 0.0) {
    if (std::abs(b1_psi) <= kModalZeroTol) {
      throw Error(ErrorCode::ZeroModalCoefficient, "<b_1|psi> vanishes but |C_1|^2 > 0");
    }
    phibar(0) += csq(0) * std::conj(u) / b1_psi;
    phibar(1) -= csq(0) * std::conj(v) / b1_psi;
  }
  if (csq(1) > 0.0) {
    if (std::abs(b2_psi) <= kModalZeroTol) {
      throw Error(ErrorCode::ZeroModalCoefficient, "<b_2|psi> vanishes but |C_2|^2 > 0");
    }
    phibar(0) -= csq(1) * v / b2_psi;
    phibar(1) += csq(1) * u / b2_psi;
  }
  return phibar;
}

SweepPath SweepPath::linear(const LorentzianParams& start, const LorentzianParams& end,
                            double duration, long samples) {
  SweepPath path;
  path.at = [start, end](double s) {
    return LorentzianParams{start.x + s * (end.x - start.x), start.y + s * (end.y - start.y),
                            start.z + s * (end.z - start.z)};
  };
  path.duration = duration;
  path.samples = samples;
  return path;
}

double ActionRecord::max_deviation() const {
  double worst = 0.0;
  for (const auto& row : deviations) {
    for (double d : row) worst = std::max(worst, d);
  }
  return worst;
}

StatePair lorentzian_initial_state(const LorentzianParams& p, const RVector& csq, double hbar) {
  if (csq.size() != 2 || (csq.array() < 0.0).any()) {
    throw Error(ErrorCode::InvalidArgument, "csq must hold two non-negative entries");
  }
  const BiorthogonalSystem sys = lorentzian_system(p);
  const CVector amp = csq.cwiseSqrt().cast<Complex>();
  StatePair s;
  s.psi = sys.right * amp;
  s.phibar = sys.left.conjugate() * amp;
  s.hbar = hbar;
  return s;
}

ActionRecord sweep_adiabatic(const SweepPath& path, const StatePair& state0, double dt) {
  if (!path.at) throw Error(ErrorCode::InvalidArgument, "sweep path has no parameter function");
  if (!(path.duration > 0.0) || path.samples < 1 || !(dt > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "sweep needs T > 0, samples >= 1 and dt > 0");
  }
  if (state0.psi.size() != 2 || state0.phibar.size() != 2) {
    throw Error(ErrorCode::InvalidArgument, "sweep state must be two-level");
  }

  const double T = path.duration;
  const long steps = std::max(1L, static_cast<long>(std::ceil(T / dt - 1e-9)));
  const double step = T / static_cast<double>(steps);
  const double hbar = state0.hbar;

  auto generator = [&](double t) {
    const LorentzianParams p = path.at(std::clamp(t / T, 0.0, 1.0));
    require_strict_regime(p);
    NhMatrix h = lorentzian_matrix(p);
    const double step_norm = step * h.operator_norm() / hbar;
    if (step_norm > kMaxStepNorm) {
      throw Error(ErrorCode::StepTooLarge,
                  "dt*||h||/hbar = " + std::to_string(step_norm) + " along the sweep");
    }
    return h;
  };

  ActionRecord record;
  BiorthogonalSystem basis = lorentzian_system(path.at(0.0));
  std::vector<Complex> initial_actions;

  auto observe = [&](const StatePair& s, const BiorthogonalSystem& sys) {
    const ModalCoordinates m = modal_coordinates(sys, s);
    std::vector<Complex> actions(2);
    std::vector<double> devs(2);
    for (Eigen::Index j = 0; j < 2; ++j) actions[j] = hbar * m.cbar(j) * m.c(j);
    if (initial_actions.empty()) initial_actions = actions;
    for (std::size_t j = 0; j < 2; ++j) {
      const double ref = std::abs(initial_actions[j]);
      const double gap = std::abs(actions[j] - initial_actions[j]);
      devs[j] = ref > 0.0 ? gap / ref : gap;
    }
    record.times.push_back(s.t);
    record.actions.push_back(std::move(actions));
    record.deviations.push_back(std::move(devs));
    record.overlaps.push_back(overlap(s));
  };

  StatePair state = state0;
  state.t = 0.0;
  observe(state, basis);

  long next_sample = 1;
  CMatrix h_start = generator(0.0).matrix();
  for (long k = 1; k <= steps; ++k) {
    const double t0 = static_cast<double>(k - 1) * step;
    const double t1 = static_cast<double>(k) * step;
    const CMatrix h_mid = generator(0.5 * (t0 + t1)).matrix();
    const CMatrix h_end = generator(t1).matrix();
    state = rk4_step(h_start, h_mid, h_end, state, step);
    state.t = t1;
    if (!state.psi.allFinite() || !state.phibar.allFinite()) {
      throw Error(ErrorCode::NonFinite, "sweep state overflowed at t = " + std::to_string(t1));
    }
    h_start = h_end;

    // Sample k is due once the step index reaches round(k * steps / samples).
    while (next_sample <= path.samples &&
           k >= (next_sample * steps + path.samples / 2) / path.samples) {
      basis = align_modes(basis, biorthogonal_decompose(NhMatrix(h_end)));
      observe(state, basis);
      ++next_sample;
    }
  }
  return record;
}

}  // namespace biham
