#include "biham/continuum.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "biham/errors.hpp"
#include "biham/spectral.hpp"

namespace biham {
namespace {

void require_field(const LatticeField& f, long n) {
  if (f.psi.size() != n || f.phibar.size() != n) {
    throw Error(ErrorCode::InvalidArgument,
                "lattice field has " + std::to_string(f.psi.size()) + " sites, expected " +
                    std::to_string(n));
  }
}

CVector central_difference(const CVector& f, double dx) {
  const Eigen::Index n = f.size();
  CVector d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i) = (f((i + 1) % n) - f((i + n - 1) % n)) / (2.0 * dx);
  }
  return d;
}

// Signed distance from the center using the nearest periodic image.
double periodic_offset(double x, double center, double length) {
  double d = std::fmod(x - center, length);
  if (d > 0.5 * length) d -= length;
  if (d < -0.5 * length) d += length;
  return d;
}

}  // namespace

void ContinuumConfig::validate() const {
  if (points < 8) throw Error(ErrorCode::InvalidArgument, "lattice needs at least 8 points");
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorCode::InvalidArgument, "domain length must be positive");
  }
  if (!(mass > 0.0)) throw Error(ErrorCode::InvalidArgument, "mass must be positive");
  if (!(hbar > 0.0)) throw Error(ErrorCode::InvalidArgument, "hbar must be positive");
}

NhMatrix discretize(const ContinuumConfig& config, const CVector& potential) {
  config.validate();
  const long n = config.points;
  if (potential.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "potential must have one sample per site");
  }
  const double dx = config.dx();
  const double hop = config.hbar * config.hbar / (2.0 * config.mass * dx * dx);

  CMatrix h = CMatrix::Zero(n, n);
  for (long i = 0; i < n; ++i) {
    h(i, i) = 2.0 * hop + potential(i);
    h(i, (i + 1) % n) += -hop;
    h(i, (i + n - 1) % n) += -hop;
  }
  return NhMatrix(std::move(h));
}

Complex lattice_charge(const LatticeField& field, double dx) {
  require_field(field, field.psi.size());
  return Complex(field.phibar.transpose() * field.psi) * dx;
}

CVector lattice_current(const LatticeField& field, const ContinuumConfig& config) {
  require_field(field, config.points);
  const double dx = config.dx();
  const CVector dpsi = central_difference(field.psi, dx);
  const CVector dphibar = central_difference(field.phibar, dx);
  const Complex prefactor = kI * config.hbar / (2.0 * config.mass);
  return prefactor * (field.phibar.cwiseProduct(dpsi) - field.psi.cwiseProduct(dphibar));
}

Complex lattice_hamiltonian(const NhMatrix& h, const LatticeField& field, double dx) {
  require_field(field, h.size());
  return Complex(field.phibar.transpose() * (h.matrix() * field.psi)) * dx;
}

LatticeField phase_rotate(const LatticeField& field, double alpha) {
  LatticeField out = field;
  const Complex phase = std::exp(kI * alpha);
  out.psi *= phase;
  out.phibar *= std::conj(phase);
  return out;
}

double continuity_residual(std::span<const LatticeField> snapshots, const ContinuumConfig& config) {
  if (snapshots.size() < 3) {
    throw Error(ErrorCode::InsufficientSnapshots,
                "central time differencing needs at least 3 snapshots, got " +
                    std::to_string(snapshots.size()));
  }
  const double interval = snapshots[1].t - snapshots[0].t;
  if (!(interval > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "snapshots must be in increasing time order");
  }
  for (std::size_t k = 1; k < snapshots.size(); ++k) {
    const double gap = snapshots[k].t - snapshots[k - 1].t;
    if (std::abs(gap - interval) > 1e-9 * std::max(1.0, std::abs(snapshots[k].t))) {
      throw Error(ErrorCode::InvalidArgument, "snapshots are not equally spaced");
    }
  }
  for (const auto& s : snapshots) require_field(s, config.points);

  const double dx = config.dx();
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < snapshots.size(); ++k) {
    const CVector rho_next = snapshots[k + 1].phibar.cwiseProduct(snapshots[k + 1].psi);
    const CVector rho_prev = snapshots[k - 1].phibar.cwiseProduct(snapshots[k - 1].psi);
    const CVector drho_dt = (rho_next - rho_prev) / (2.0 * interval);
    const CVector div_j = central_difference(lattice_current(snapshots[k], config), dx);
    // j as defined above points against the flow of phibar*psi, so the
    // balance law the dynamics satisfy is d_t rho = +d_x j.
    worst = std::max(worst, (drho_dt - div_j).cwiseAbs().maxCoeff());
  }
  return worst;
}

CVector gaussian_packet(const ContinuumConfig& config, double center, double width,
                        double wavenumber) {
  config.validate();
  if (!(width > 0.0)) throw Error(ErrorCode::InvalidArgument, "packet width must be positive");
  CVector psi(config.points);
  for (long i = 0; i < config.points; ++i) {
    const double d = periodic_offset(config.position(i), center, config.length);
    psi(i) = std::exp(-d * d / (4.0 * width * width)) * std::exp(kI * (wavenumber * d));
  }
  psi /= std::sqrt(psi.squaredNorm() * config.dx());
  return psi;
}

CVector plane_wave(const ContinuumConfig& config, long mode) {
  config.validate();
  const double k = 2.0 * std::numbers::pi * static_cast<double>(mode) / config.length;
  CVector psi(config.points);
  for (long i = 0; i < config.points; ++i) {
    psi(i) = std::exp(kI * (k * config.position(i))) / std::sqrt(config.length);
  }
  return psi;
}

CVector complex_gaussian_potential(const ContinuumConfig& config, Complex amplitude,
                                   double center, double width) {
  config.validate();
  if (!(width > 0.0)) throw Error(ErrorCode::InvalidArgument, "potential width must be positive");
  CVector v(config.points);
  for (long i = 0; i < config.points; ++i) {
    const double d = periodic_offset(config.position(i), center, config.length);
    v(i) = amplitude * std::exp(-d * d / (2.0 * width * width));
  }
  return v;
}

LatticeField make_lattice_field(const ContinuumConfig& config, const CVector& potential,
                                const CVector& psi) {
  const NhMatrix h = discretize(config, potential);
  const BiorthogonalSystem sys = biorthogonal_decompose(h);
  LatticeField field;
  field.psi = psi;
  field.phibar = conjugate_field(sys, psi, default_modal_constants(sys, psi));
  field.potential = potential;
  return field;
}

StatePair to_state(const LatticeField& field, double hbar) {
  StatePair s;
  s.psi = field.psi;
  s.phibar = field.phibar;
  s.t = field.t;
  s.hbar = hbar;
  return s;
}

LatticeField to_field(const StatePair& state, const CVector& potential) {
  return {state.psi, state.phibar, potential, state.t};
}

}  // namespace biham
