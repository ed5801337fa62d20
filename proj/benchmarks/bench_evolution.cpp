// Cost of the spectral free-evolution step, the inner loop of every
// probability rule: pure-state vectors scale n log n, density-matrix
// kernels add a factor n.

#include <benchmark/benchmark.h>

#include <twotime/evolution.hpp>
#include <twotime/state.hpp>

using namespace twotime;

namespace {

PositionGrid grid_for(int n) {
  return PositionGrid::make(-24.0, 24.0, n);
}

void BM_EvolvePureState(benchmark::State& state) {
  const PositionGrid g = grid_for(static_cast<int>(state.range(0)));
  const FreeEvolver evolver(g, 1.0);
  const PureState psi = make_gaussian_state(g, 1.5, 0.8, 0.0);
  Eigen::VectorXcd amp = psi.amplitudes();
  for (auto _ : state) {
    evolver.apply_raw(amp, 0.8);
    benchmark::DoNotOptimize(amp.data());
  }
  state.SetComplexityN(state.range(0));
}

void BM_EvolveDensityMatrix(benchmark::State& state) {
  const PositionGrid g = grid_for(static_cast<int>(state.range(0)));
  const FreeEvolver evolver(g, 1.0);
  const DensityMatrix rho =
      DensityMatrix::mixture({make_gaussian_state(g, 1.5, 0.8, -1.0),
                              make_gaussian_state(g, 1.2, -0.4, 1.0)},
                             {0.6, 0.4});
  Eigen::MatrixXcd kernel = rho.elements();
  for (auto _ : state) {
    evolver.apply_raw(kernel, 0.8);
    benchmark::DoNotOptimize(kernel.data());
  }
  state.SetComplexityN(state.range(0));
}

void BM_GuardedEvolve(benchmark::State& state) {
  // Full apply(): spectral step plus normalization and tail-guard scan.
  const PositionGrid g = grid_for(static_cast<int>(state.range(0)));
  const FreeEvolver evolver(g, 1.0);
  const PureState psi = make_gaussian_state(g, 1.5, 0.8, 0.0);
  for (auto _ : state) {
    PureState out = evolver.apply(psi, 0.8);
    benchmark::DoNotOptimize(out.amplitudes().data());
  }
}

}  // namespace

BENCHMARK(BM_EvolvePureState)->RangeMultiplier(4)->Range(256, 16384)->Complexity();
BENCHMARK(BM_EvolveDensityMatrix)->RangeMultiplier(2)->Range(256, 1024)->Complexity();
BENCHMARK(BM_GuardedEvolve)->Arg(1024)->Arg(4096);

BENCHMARK_MAIN();
