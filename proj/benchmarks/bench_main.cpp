#include <benchmark/benchmark.h>

#include "birkhoff/excursion_law.hpp"
#include "birkhoff/renewal.hpp"
#include "birkhoff/simulator.hpp"

using namespace birkhoff;

namespace {

const ExcursionLaw& shared_law() {
  static const ExcursionLaw law(LawSpec::log_squared(), (1 << 20) + 2);
  return law;
}

void BM_RenewalTable(benchmark::State& state) {
  const auto n = state.range(0);
  const ExcursionLaw& law = shared_law();
  for (auto _ : state) {
    RenewalTable t(law, n);
    benchmark::DoNotOptimize(t.u(n));
  }
  state.SetComplexityN(n);
  state.counters["mul_adds/s"] = benchmark::Counter(0.5 * static_cast<double>(n) * static_cast<double>(n),
                                                    benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_RenewalTable)->RangeMultiplier(4)->Range(1 << 10, 1 << 15)->Unit(benchmark::kMillisecond)->Complexity();

void BM_SampleTruncated(benchmark::State& state) {
  const ExcursionLaw& law = shared_law();
  RandomStream rng(1);
  const auto horizon = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(law.sample_truncated(horizon, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleTruncated)->Arg(1000)->Arg(1 << 20);

void BM_HeightPath(benchmark::State& state) {
  const ExcursionLaw& law = shared_law();
  RandomStream rng(2);
  HeightPath path;
  for (auto _ : state) {
    simulate_height_path(law, state.range(0), rng, path);
    benchmark::DoNotOptimize(path.final_height);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HeightPath)->Arg(10000)->Arg(1000000);

void BM_SimulateScenario(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.scenario = static_cast<Scenario>(state.range(0));
  cfg.n = 1000000;
  cfg.samples = 2000;
  cfg.workers = 1;
  if (cfg.scenario == Scenario::IidGaussian) cfg.n = 1000;
  if (cfg.scenario == Scenario::Degenerate) cfg.n = 100000;
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg).records.size());
  state.SetLabel(to_string(cfg.scenario));
  state.SetItemsProcessed(state.iterations() * cfg.samples);
}
BENCHMARK(BM_SimulateScenario)
    ->DenseRange(0, 4)
    ->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
