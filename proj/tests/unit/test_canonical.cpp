#include <doctest.h>

#include <cmath>

#include "biham/canonical.hpp"
#include "biham/dynamics.hpp"
#include "biham/spectral.hpp"
#include "support/oracles.hpp"

using namespace biham;

namespace {

// Direct double sum, independent of the Eigen products used by the library.
Complex hamiltonian_sum(const CMatrix& h, const CVector& phibar, const CVector& psi) {
  Complex acc = 0.0;
  for (Eigen::Index j = 0; j < h.rows(); ++j) {
    for (Eigen::Index k = 0; k < h.cols(); ++k) acc += phibar(j) * h(j, k) * psi(k);
  }
  return acc;
}

struct Setup {
  NhMatrix h;
  BiorthogonalSystem sys;
  StatePair state;
};

Setup random_setup(Eigen::Index n, oracle::Rng& rng, double hbar = 1.0) {
  NhMatrix h(oracle::random_diagonalizable(n, rng, 1e2).h);
  auto sys = biorthogonal_decompose(h);
  auto state = make_state_pair(sys, oracle::random_vector(n, rng), std::nullopt, hbar);
  return {h, sys, state};
}

}  // namespace

TEST_CASE("hamiltonian value examples") {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  const NhMatrix h(m);
  StatePair s{CVector::Zero(2), CVector::Zero(2), 0.0, 1.0};
  s.psi(0) = 1.0;
  s.phibar(0) = 1.0;
  CHECK(hamiltonian_value(h, s) == Complex(1.0, 0.0));
  s.psi << 0.0, 1.0;
  s.phibar << 0.0, 1.0;
  CHECK(hamiltonian_value(h, s) == Complex(-1.0, 0.0));
  s.psi << 1.0, 1.0;
  s.phibar << 0.5, 0.5;
  CHECK(std::abs(hamiltonian_value(h, s)) < 1e-15);
}

TEST_CASE("direct and modal hamiltonians agree") {
  oracle::Rng rng(21);
  for (Eigen::Index n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto s = random_setup(n, rng);
      const Complex direct = hamiltonian_sum(s.h.matrix(), s.state.phibar, s.state.psi);
      CHECK(std::abs(hamiltonian_value(s.h, s.state) - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
      const Complex modal = modal_hamiltonian(s.sys, modal_coordinates(s.sys, s.state));
      CHECK(std::abs(modal - direct) <= 1e-10 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("analytic gradient matches an independent central difference") {
  oracle::Rng rng(22);
  const double eps = 1e-6;
  for (double hbar : {1.0, 0.3}) {
    const auto s = random_setup(4, rng, hbar);
    const auto grad = hamiltonian_gradient(s.h, s.state);
    const CMatrix& m = s.h.matrix();
    const Complex ihbar(0.0, hbar);
    double scale = std::max(grad.d_phibar.cwiseAbs().maxCoeff(), grad.d_q.cwiseAbs().maxCoeff());
    for (Eigen::Index k = 0; k < 4; ++k) {
      // H is holomorphic in each coordinate, so a real step gives the complex derivative.
      CVector up = s.state.phibar, dn = s.state.phibar;
      up(k) += eps;
      dn(k) -= eps;
      const Complex d_phibar =
          (hamiltonian_sum(m, up, s.state.psi) - hamiltonian_sum(m, dn, s.state.psi)) / (2 * eps);
      CHECK(std::abs(d_phibar - grad.d_phibar(k)) <= 1e-6 * scale);

      // q = i hbar psi, so psi = q / (i hbar).
      CVector pu = s.state.psi, pd = s.state.psi;
      pu(k) += eps / ihbar;
      pd(k) -= eps / ihbar;
      const Complex d_q =
          (hamiltonian_sum(m, s.state.phibar, pu) - hamiltonian_sum(m, s.state.phibar, pd)) / (2 * eps);
      CHECK(std::abs(d_q - grad.d_q(k)) <= 1e-6 * scale);
    }
    CHECK(finite_difference_mismatch(s.h, s.state) <= 1e-6);
  }
}

TEST_CASE("canonical equations reproduce the coupled dynamics") {
  oracle::Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = random_setup(5, rng, trial % 2 ? 1.0 : 2.5);
    const auto can = canonical_rhs(s.h, s.state);
    const auto sch = schrodinger_rhs(s.h.matrix(), s.state);
    const double scale = std::max(sch.dpsi.cwiseAbs().maxCoeff(), sch.dphibar.cwiseAbs().maxCoeff());
    CHECK((can.dpsi - sch.dpsi).cwiseAbs().maxCoeff() <= 1e-14 * scale);
    CHECK((can.dphibar - sch.dphibar).cwiseAbs().maxCoeff() <= 1e-14 * scale);
  }
}

TEST_CASE("lagrangian vanishes on shell") {
  oracle::Rng rng(24);
  const auto s = random_setup(4, rng);
  const CVector psidot = schrodinger_rhs(s.h.matrix(), s.state).dpsi;
  CHECK(std::abs(lagrangian_value(s.h, s.state, psidot)) <= 1e-12 * std::max(1.0, std::abs(hamiltonian_value(s.h, s.state))));
  CHECK(std::abs(lagrangian_value(s.h, s.state, CVector::Zero(4)) + hamiltonian_value(s.h, s.state)) < 1e-14);
}

TEST_CASE("hamiltonian is conserved along exact evolution") {
  oracle::Rng rng(25);
  const NhMatrix h(oracle::random_diagonalizable(4, rng, 1e2, 1e-3, true).h);
  const auto sys = biorthogonal_decompose(h);
  const Setup s{h, sys, make_state_pair(sys, oracle::random_vector(4, rng))};
  const Complex h0 = hamiltonian_value(s.h, s.state);
  for (double t : {0.5, 2.0, 9.0}) {
    const Complex ht = hamiltonian_value(s.h, evolve_exact(s.sys, s.state, t));
    CHECK(std::abs(ht - h0) <= 1e-10 * std::max(1.0, std::abs(h0)));
  }
}

TEST_CASE("verify_canonical report") {
  oracle::Rng rng(26);
  const auto s = random_setup(3, rng);
  const CanonicalReport r = verify_canonical(s.h, s.sys, s.state);
  CHECK(std::abs(r.hamiltonian_value - r.modal_value) <= 1e-10);
  CHECK(r.rhs_mismatch <= 1e-12);
  CHECK(r.grad_mismatch <= 1e-6);
}
