// Trial-sampling throughput: the one-time cost of building the joint
// law, then the per-trial cost of drawing outcomes, single-threaded and
// across worker threads (counter-based streams make the schedule free).

#include <benchmark/benchmark.h>

#include <twotime/sampler.hpp>

using namespace twotime;

namespace {

SampleSet make_set(const char* name, double lo, double hi) {
  SampleSet s;
  s.name = name;
  s.intervals = {{lo, hi}};
  return s;
}

TwoTimeSpec interfering_spec() {
  const PositionGrid g = PositionGrid::make(-24.0, 24.0, 512);
  const PureState psi = make_gaussian_state(g, 1.5, 0.8, 0.0);
  SamplePartition first = SamplePartition::build(
      g, 1.5, {make_set("A", -3.0, 0.0), make_set("B", 0.0, 3.0)});
  SamplePartition second = SamplePartition::build(
      g, 1.5, {make_set("V", 0.0, 1.5), make_set("W", 1.5, 4.5)});
  return TwoTimeSpec{psi, 1.0, 0.4, 1.2, std::move(first), std::move(second),
                     OperatorKind::SharpInterval};
}

const TrialSampler& shared_sampler() {
  static const TrialSampler sampler(interfering_spec(),
                                    DeviceModel::full_recorder(1.5),
                                    DeviceModel::full_recorder(1.5));
  return sampler;
}

void BM_SamplerConstruction(benchmark::State& state) {
  // Dominated by one collapse-evolve chain per first-stage cell.
  const TwoTimeSpec spec = interfering_spec();
  for (auto _ : state) {
    TrialSampler sampler(spec, DeviceModel::full_recorder(1.5),
                         DeviceModel::full_recorder(1.5));
    benchmark::DoNotOptimize(&sampler);
  }
}

void BM_SingleTrial(benchmark::State& state) {
  const TrialSampler& sampler = shared_sampler();
  std::uint64_t index = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.sample(42, index++));
  }
}

void BM_TrialBatch(benchmark::State& state) {
  const TrialSampler& sampler = shared_sampler();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trials(sampler, 100000, 42, threads));
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}

void BM_JointModel(benchmark::State& state) {
  const TrialSampler& sampler = shared_sampler();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.joint_model());
  }
}

}  // namespace

BENCHMARK(BM_SamplerConstruction);
BENCHMARK(BM_SingleTrial);
BENCHMARK(BM_TrialBatch)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();
BENCHMARK(BM_JointModel);

BENCHMARK_MAIN();
