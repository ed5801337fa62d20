// Cost of the probability rules as the cell count grows: the cell-sum
// rule pays one collapse-evolve-weigh chain per cell, the merged rule a
// constant number.

#include <benchmark/benchmark.h>

#include <twotime/two_time.hpp>

using namespace twotime;

namespace {

SampleSet make_set(const char* name, double lo, double hi) {
  SampleSet s;
  s.name = name;
  s.intervals = {{lo, hi}};
  return s;
}

// Interfering arrangement: set lengths fixed at 3 and 6, resolution
// varied, so the benchmark argument is the total number of cells.
TwoTimeSpec spec_with_delta(double delta) {
  const PositionGrid g = PositionGrid::make(-24.0, 24.0, 1024);
  const PureState psi = make_gaussian_state(g, 1.5, 0.8, 0.0);
  SamplePartition first = SamplePartition::build(
      g, delta, {make_set("A", -3.0, 0.0), make_set("B", 0.0, 3.0)});
  SamplePartition second = SamplePartition::build(
      g, delta, {make_set("V", 0.0, 1.5), make_set("W", 1.5, 7.5)});
  return TwoTimeSpec{psi, 1.0, 0.4, 1.2, std::move(first), std::move(second),
                     OperatorKind::SharpInterval};
}

double delta_from_cells(std::int64_t cells_per_unit) {
  return 1.5 / static_cast<double>(cells_per_unit);
}

void BM_ContextualRule(benchmark::State& state) {
  const TwoTimeEngine engine(spec_with_delta(delta_from_cells(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.contextual_two_time(1, 1));
  }
}

void BM_StandardRule(benchmark::State& state) {
  const TwoTimeEngine engine(spec_with_delta(delta_from_cells(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.standard_two_time(1, 1));
  }
}

void BM_ResolutionDifference(benchmark::State& state) {
  // Includes the cross-check: both resolutions plus the half-pair
  // interference sum.
  const TwoTimeSpec spec = spec_with_delta(delta_from_cells(state.range(0)));
  const double delta = spec.first.delta();
  const TwoTimeEngine engine(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.resolution_difference(1, 1, delta));
  }
}

void BM_DecoherenceFunctional(benchmark::State& state) {
  const TwoTimeEngine engine(spec_with_delta(delta_from_cells(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.decoherence_functional(0, 1, 1));
  }
}

}  // namespace

BENCHMARK(BM_ContextualRule)->Arg(1)->Arg(2)->Arg(4)->Arg(8);
BENCHMARK(BM_StandardRule)->Arg(1)->Arg(2)->Arg(4)->Arg(8);
BENCHMARK(BM_ResolutionDifference)->Arg(2)->Arg(4)->Arg(8);
BENCHMARK(BM_DecoherenceFunctional)->Arg(1)->Arg(4);

BENCHMARK_MAIN();
