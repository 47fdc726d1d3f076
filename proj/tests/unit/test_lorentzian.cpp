#include <doctest.h>

#include <cmath>
#include <random>

#include "biham/dynamics.hpp"
#include "biham/errors.hpp"
#include "biham/lorentzian.hpp"
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

// Unit-modulus gauge phase between two vectors that should be parallel.
double gauge_gap(const CVector& a, const CVector& b) {
  const Complex ratio = a.dot(b) / a.squaredNorm();
  return (ratio * a - b).norm() / b.norm();
}

ActionRecord reference_sweep(double T, double dt = 1e-3, long samples = 500) {
  const LorentzianParams start{1.0, 0.0, 3.0};
  const LorentzianParams end{1.0, 0.0, 5.0};
  const RVector csq = (RVector(2) << 1.0, 0.0).finished();
  return sweep_adiabatic(SweepPath::linear(start, end, T, samples),
                         lorentzian_initial_state(start, csq), dt);
}

}  // namespace

TEST_CASE("matrix layout") {
  const CMatrix h = lorentzian_matrix({1.0, 2.0, 3.0}).matrix();
  CHECK(h(0, 0) == Complex(3.0, 0.0));
  CHECK(h(0, 1) == Complex(1.0, 2.0));
  CHECK(h(1, 0) == Complex(-1.0, 2.0));
  CHECK(h(1, 1) == Complex(-3.0, 0.0));
  CHECK_FALSE(lorentzian_matrix({1.0, 2.0, 3.0}).is_hermitian());
  CHECK(lorentzian_matrix({0.0, 0.0, 3.0}).is_hermitian());
}

TEST_CASE("closed-form eigenpairs at reference points") {
  SUBCASE("(0, 0, 1) is diagonal") {
    const auto e = lorentzian_uv({0.0, 0.0, 1.0});
    CHECK(e.u == Complex(-1.0, 0.0));
    CHECK(e.v == Complex(0.0, 0.0));
    CHECK(e.energy == Complex(1.0, 0.0));
  }
  SUBCASE("(1, 0, 2) against high-precision values") {
    const auto e = lorentzian_uv({1.0, 0.0, 2.0});
    CHECK(std::abs(e.u - Complex(-1.03795484930204250, 0.0)) < 1e-14);
    CHECK(std::abs(e.v - Complex(0.278119163650449957, 0.0)) < 1e-14);
    CHECK(std::abs(e.energy - Complex(1.73205080756887729, 0.0)) < 1e-14);
  }
  SUBCASE("negative z flips the branch") {
    const auto e = lorentzian_uv({0.5, 0.2, -2.0});
    CHECK(e.energy.real() < 0.0);
    const CMatrix h = lorentzian_matrix({0.5, 0.2, -2.0}).matrix();
    CVector a(2);
    a << e.u, e.v;
    CHECK((h * a - e.energy * a).norm() < 1e-13);
  }
  SUBCASE("exceptional point and broken regime are rejected") {
    CHECK(code_of([] { (void)lorentzian_uv({1.0, 0.0, 1.0}); }) == ErrorCode::OutsideRealRegime);
    CHECK(code_of([] { (void)lorentzian_uv({2.0, 0.0, 1.0}); }) == ErrorCode::OutsideRealRegime);
    CHECK(code_of([] { (void)lorentzian_uv({0.0, 0.0, 0.0}); }) == ErrorCode::OutsideRealRegime);
    CHECK(code_of([] { (void)biorthogonal_decompose(lorentzian_matrix({1.0, 0.0, 1.0})); }) ==
          ErrorCode::NotDiagonalizable);
  }
}

TEST_CASE("closed form holds on random real-regime points") {
  oracle::Rng rng(31);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  int checked = 0;
  while (checked < 100) {
    const LorentzianParams p{coord(rng), coord(rng), coord(rng)};
    if (p.discriminant() < 1e-2) continue;
    ++checked;
    const CMatrix h = lorentzian_matrix(p).matrix();
    const auto e = lorentzian_uv(p);
    const double scale = std::max(1.0, h.norm());
    CHECK(std::abs(e.energy - std::copysign(std::sqrt(p.discriminant()), p.z)) < 1e-12 * scale);
    CHECK(std::abs(std::norm(e.u) - std::norm(e.v) - 1.0) < 1e-10);

    const auto sys = lorentzian_system(p);
    const double cond = sys.cond;
    const CMatrix bd_a = sys.left.adjoint() * sys.right;
    CHECK(oracle::max_abs(bd_a - CMatrix::Identity(2, 2)) <= 1e-10 * cond * cond);
    for (Eigen::Index j = 0; j < 2; ++j) {
      const CVector a = sys.right.col(j);
      const CVector b = sys.left.col(j);
      const Complex E = sys.eigenvalues(j);
      CHECK((h * a - E * a).norm() <= 1e-12 * scale * a.norm());
      CHECK((h.adjoint() * b - std::conj(E) * b).norm() <= 1e-12 * scale * b.norm());
    }

    // Same modes as the numerical decomposition, up to gauge.
    const auto num = biorthogonal_decompose(NhMatrix(h));
    for (Eigen::Index j = 0; j < 2; ++j) {
      const Eigen::Index k = std::abs(num.eigenvalues(0) - sys.eigenvalues(j)) <
                                     std::abs(num.eigenvalues(1) - sys.eigenvalues(j))
                                 ? 0
                                 : 1;
      CHECK(std::abs(num.eigenvalues(k) - sys.eigenvalues(j)) < 1e-10 * scale);
      CHECK(gauge_gap(num.right.col(k), sys.right.col(j)) < 1e-8 * cond);
    }
  }
}

TEST_CASE("closed-form conjugate matches the generic construction") {
  oracle::Rng rng(32);
  const LorentzianParams p{0.7, -0.4, 1.9};
  const auto sys = lorentzian_system(p);
  for (int trial = 0; trial < 10; ++trial) {
    const CVector psi = oracle::random_vector(2, rng);
    const RVector csq = (RVector(2) << 0.3 + trial, 1.2).finished();
    const CVector closed = lorentzian_conjugate(p, psi, csq);
    const CVector generic = conjugate_field(sys, psi, csq);
    CHECK((closed - generic).norm() <= 1e-12 * generic.norm());
  }
  CVector a1 = sys.right.col(0);
  CHECK(code_of([&] { (void)lorentzian_conjugate(p, a1, RVector::Ones(2)); }) ==
        ErrorCode::ZeroModalCoefficient);
}

TEST_CASE("initial state carries the requested actions") {
  const LorentzianParams p{1.0, 0.5, 2.5};
  const RVector csq = (RVector(2) << 0.8, 0.2).finished();
  const StatePair s = lorentzian_initial_state(p, csq, 0.5);
  const ModalCoordinates m = modal_coordinates(lorentzian_system(p), s);
  CHECK((m.csq - csq).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(overlap(s) - 1.0) < 1e-14);
  CHECK(s.hbar == 0.5);
}

TEST_CASE("constant path keeps the actions fixed") {
  const LorentzianParams p{1.0, 0.0, 3.0};
  const RVector csq = (RVector(2) << 0.6, 0.4).finished();
  const auto rec =
      sweep_adiabatic(SweepPath::linear(p, p, 20.0, 50), lorentzian_initial_state(p, csq), 1e-3);
  REQUIRE(rec.times.size() == 51);
  CHECK(rec.times.front() == 0.0);
  CHECK(rec.times.back() == doctest::Approx(20.0));
  CHECK(rec.max_deviation() < 1e-10);
  for (const Complex o : rec.overlaps) CHECK(std::abs(o - 1.0) < 1e-10);
}

TEST_CASE("adiabatic deviation decreases with sweep duration") {
  const double d50 = reference_sweep(50.0).max_deviation();
  const double d100 = reference_sweep(100.0).max_deviation();
  const double d200 = reference_sweep(200.0).max_deviation();
  CHECK(d50 > d100);
  CHECK(d100 > d200);
  // Non-adiabatic leakage amplitude ~ 1/T, so the action deviation ~ 1/T^2.
  CHECK(d50 / d100 == doctest::Approx(4.0).epsilon(0.15));
  CHECK(d100 / d200 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("reference sweep regression") {
  const auto rec = reference_sweep(100.0);
  CHECK(rec.times.size() == 501);
  CHECK(rec.max_deviation() == doctest::Approx(1.8945850892843299e-07).epsilon(1e-6));
}

TEST_CASE("sweep error paths") {
  const RVector csq = (RVector(2) << 1.0, 0.0).finished();
  const LorentzianParams start{0.0, 0.0, 2.0};
  const StatePair s0 = lorentzian_initial_state(start, csq);
  // Crosses z = 0: passes through the exceptional region.
  const auto through = SweepPath::linear(start, {1.0, 0.0, -2.0}, 10.0, 10);
  CHECK(code_of([&] { (void)sweep_adiabatic(through, s0, 1e-2); }) == ErrorCode::OutsideRealRegime);
  const auto fine = SweepPath::linear(start, {0.0, 0.0, 3.0}, 10.0, 10);
  CHECK(code_of([&] { (void)sweep_adiabatic(fine, s0, 0.5); }) == ErrorCode::StepTooLarge);
  CHECK(code_of([&] { (void)sweep_adiabatic(fine, s0, -1.0); }) == ErrorCode::InvalidArgument);
}
