#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "biham/continuum.hpp"
#include "biham/dynamics.hpp"
#include "biham/errors.hpp"
#include "biham/spectral.hpp"
#include "support/oracles.hpp"

using namespace biham;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected biham::Error");
  return ErrorCode::InvalidArgument;
}

ContinuumConfig ring(long n) { return {4.0, n, 1.0, 1.0}; }

CVector absorbing(const ContinuumConfig& c) {
  return complex_gaussian_potential(c, Complex(2.0, -1.0), 2.0, 0.5);
}

std::vector<LatticeField> snapshots(const ContinuumConfig& c, const LatticeField& f0, double dt,
                                    long steps, long every) {
  const NhMatrix h = discretize(c, f0.potential);
  std::vector<LatticeField> out;
  (void)evolve_rk4(h, to_state(f0, c.hbar), dt, steps,
                   [&](const StatePair& s) { out.push_back(to_field(s, f0.potential)); }, every);
  return out;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK(code_of([] { ring(4).validate(); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { ContinuumConfig{-1.0, 16, 1.0, 1.0}.validate(); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { ContinuumConfig{1.0, 16, 0.0, 1.0}.validate(); }) == ErrorCode::InvalidArgument);
  CHECK(ring(16).dx() == 0.25);
  CHECK(ring(16).position(3) == 0.75);
}

TEST_CASE("discretized generator layout") {
  const ContinuumConfig c{1.0, 8, 0.5, 1.0};
  CVector v = CVector::Zero(8);
  v(2) = Complex(0.3, -0.2);
  const CMatrix h = discretize(c, v).matrix();
  const double hop = 1.0 / (2.0 * 0.5 * 0.125 * 0.125);
  CHECK(h(0, 0) == Complex(2.0 * hop, 0.0));
  CHECK(h(2, 2) == Complex(2.0 * hop + 0.3, -0.2));
  CHECK(h(0, 1) == Complex(-hop, 0.0));
  CHECK(h(0, 7) == Complex(-hop, 0.0));
  CHECK(h(7, 0) == Complex(-hop, 0.0));
  CHECK(h(0, 3) == Complex(0.0, 0.0));
  CHECK(discretize(c, CVector::Zero(8)).is_hermitian());
  CHECK_FALSE(discretize(c, v).is_hermitian());
  CHECK(code_of([&] { (void)discretize(c, CVector::Zero(7)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("plane waves are lattice eigenmodes with the discrete dispersion") {
  const ContinuumConfig c = ring(32);
  const NhMatrix h = discretize(c, CVector::Zero(32));
  const double dx = c.dx();
  for (long mode : {0L, 1L, 3L, -5L}) {
    const CVector pw = plane_wave(c, mode);
    const double k = 2.0 * std::numbers::pi * static_cast<double>(mode) / c.length;
    const double energy = (1.0 - std::cos(k * dx)) / (dx * dx);
    CHECK((h.matrix() * pw - energy * pw).norm() < 1e-10 * std::max(1.0, energy));
    CHECK(pw.squaredNorm() * dx == doctest::Approx(1.0));
  }
}

TEST_CASE("plane-wave current and charge") {
  const ContinuumConfig c = ring(32);
  const double dx = c.dx();
  const long mode = 2;
  const double k = 2.0 * std::numbers::pi * mode / c.length;
  LatticeField f{plane_wave(c, mode), plane_wave(c, mode).conjugate(), CVector::Zero(32), 0.0};
  CHECK(std::abs(lattice_charge(f, dx) - 1.0) < 1e-13);
  const CVector j = lattice_current(f, c);
  const double expected = -c.hbar * std::sin(k * dx) / (c.mass * dx * c.length);
  for (Eigen::Index i = 0; i < j.size(); ++i) CHECK(std::abs(j(i) - expected) < 1e-12);

  // Stationary: rho constant and j uniform, so the discrete balance is exact.
  const auto snaps = snapshots(c, f, 1e-4, 20, 5);
  CHECK(continuity_residual(snaps, c) <= 1e-10);
}

TEST_CASE("lattice charge is a bilinear sum") {
  const ContinuumConfig c = ring(8);
  LatticeField f{CVector::Ones(8), CVector::Zero(8), CVector::Zero(8), 0.0};
  f.phibar(0) = Complex(0.0, 2.0);
  f.phibar(5) = 1.0;
  CHECK(lattice_charge(f, c.dx()) == Complex(0.5, 1.0));
}

TEST_CASE("phase rotation leaves charge and energy unchanged") {
  const ContinuumConfig c = ring(32);
  const CVector v = absorbing(c);
  const LatticeField f = make_lattice_field(c, v, gaussian_packet(c, 1.0, 0.3, 4.0));
  const NhMatrix h = discretize(c, v);
  const Complex q = lattice_charge(f, c.dx());
  const Complex e = lattice_hamiltonian(h, f, c.dx());
  for (double alpha : {0.1, 1.0, std::numbers::pi}) {
    const LatticeField g = phase_rotate(f, alpha);
    CHECK(std::abs(lattice_charge(g, c.dx()) - q) <= 1e-12 * std::abs(q));
    CHECK(std::abs(lattice_hamiltonian(h, g, c.dx()) - e) <= 1e-12 * std::abs(e));
    CHECK((g.psi - f.psi).norm() > 0.0);
  }
}

TEST_CASE("gaussian packet shape") {
  const ContinuumConfig c = ring(64);
  const CVector psi = gaussian_packet(c, 0.0, 0.3, 0.0);
  CHECK(psi.squaredNorm() * c.dx() == doctest::Approx(1.0));
  // Nearest periodic image: the last site sits one dx below the center.
  CHECK(std::abs(psi(63) - psi(1)) < 1e-14);
  CHECK(std::abs(psi(0)) > std::abs(psi(1)));
  CHECK(code_of([&] { (void)gaussian_packet(c, 0.0, 0.0, 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("lattice decomposition stays biorthonormal") {
  for (long n : {16L, 32L, 64L}) {
    const ContinuumConfig c = ring(n);
    const auto sys = biorthogonal_decompose(discretize(c, absorbing(c)));
    CHECK(biorthonormality_residual(sys) <= 1e-10);
    CHECK(completeness_residual(sys) <= 1e-10);
  }
}

TEST_CASE("charge is conserved under lattice evolution") {
  const ContinuumConfig c = ring(64);
  const CVector v = absorbing(c);
  const LatticeField f0 = make_lattice_field(c, v, gaussian_packet(c, 1.0, 0.3, 8.0));
  const auto snaps = snapshots(c, f0, 1e-4, 2000, 100);
  const Complex q0 = lattice_charge(f0, c.dx());
  double drift = 0.0;
  for (const auto& s : snaps) drift = std::max(drift, std::abs(lattice_charge(s, c.dx()) - q0));
  CHECK(drift <= 1e-8);
  // psi alone is not conserved: the imaginary potential changes its norm.
  CHECK(std::abs(snaps.back().psi.squaredNorm() - f0.psi.squaredNorm()) * c.dx() > 1e-4);
}

TEST_CASE("continuity residual converges at second order in dx") {
  std::vector<double> residual;
  for (long n : {64L, 128L}) {
    const ContinuumConfig c = ring(n);
    const CVector v = absorbing(c);
    const LatticeField f0 = make_lattice_field(c, v, gaussian_packet(c, 1.0, 0.3, 8.0));
    residual.push_back(continuity_residual(snapshots(c, f0, 1e-5, 100, 10), c));
  }
  CHECK(residual[0] / residual[1] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("continuity residual input checks") {
  const ContinuumConfig c = ring(16);
  LatticeField f{CVector::Ones(16), CVector::Ones(16), CVector::Zero(16), 0.0};
  std::vector<LatticeField> two{f, f};
  two[1].t = 1.0;
  CHECK(code_of([&] { (void)continuity_residual(two, c); }) == ErrorCode::InsufficientSnapshots);
  std::vector<LatticeField> uneven{f, f, f};
  uneven[1].t = 1.0;
  uneven[2].t = 3.0;
  CHECK(code_of([&] { (void)continuity_residual(uneven, c); }) == ErrorCode::InvalidArgument);
}
