#include <benchmark/benchmark.h>

#include "biham/continuum.hpp"
#include "biham/dynamics.hpp"
#include "biham/lorentzian.hpp"
#include "biham/spectral.hpp"
#include "support/oracles.hpp"

using namespace biham;

static void BM_Decompose(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  oracle::Rng rng(1);
  const NhMatrix h(oracle::random_diagonalizable(n, rng, 1e2).h);
  for (auto _ : state) benchmark::DoNotOptimize(biorthogonal_decompose(h));
}
BENCHMARK(BM_Decompose)->RangeMultiplier(2)->Range(2, 64);

static void BM_Rk4Step(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  oracle::Rng rng(2);
  const CMatrix h = oracle::random_diagonalizable(n, rng, 1e2).h;
  StatePair s{oracle::random_vector(n, rng), oracle::random_vector(n, rng), 0.0, 1.0};
  for (auto _ : state) {
    s = rk4_step(h, h, h, s, 1e-3);
    benchmark::DoNotOptimize(s.psi.data());
  }
}
BENCHMARK(BM_Rk4Step)->RangeMultiplier(2)->Range(2, 64);

static void BM_EvolveExact(benchmark::State& state) {
  oracle::Rng rng(3);
  const auto sys = biorthogonal_decompose(NhMatrix(oracle::random_diagonalizable(8, rng, 1e2).h));
  const StatePair s0 = make_state_pair(sys, oracle::random_vector(8, rng));
  double t = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(evolve_exact(sys, s0, t += 1e-3));
}
BENCHMARK(BM_EvolveExact);

static void BM_LatticeStep(benchmark::State& state) {
  const ContinuumConfig c{4.0, state.range(0), 1.0, 1.0};
  const CVector v = complex_gaussian_potential(c, Complex(2.0, -1.0), 2.0, 0.5);
  const CMatrix h = discretize(c, v).matrix();
  const CVector psi = gaussian_packet(c, 1.0, 0.3, 8.0);
  StatePair s{psi, psi.conjugate(), 0.0, 1.0};
  for (auto _ : state) {
    s = rk4_step(h, h, h, s, 1e-5);
    benchmark::DoNotOptimize(s.psi.data());
  }
}
BENCHMARK(BM_LatticeStep)->Arg(64)->Arg(128)->Arg(256);

static void BM_Sweep(benchmark::State& state) {
  const LorentzianParams a{1.0, 0.0, 3.0}, b{1.0, 0.0, 5.0};
  const RVector csq = (RVector(2) << 1.0, 0.0).finished();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sweep_adiabatic(SweepPath::linear(a, b, 10.0, 100), lorentzian_initial_state(a, csq), 1e-3));
  }
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
