#include <benchmark/benchmark.h>

#include "robinf/harness.hpp"

namespace {

void BM_ToJoint(benchmark::State& state) {
  robinf::RandomStream rng(7, 0);
  const auto chain = robinf::sample_true_model(rng, robinf::Topology::prototypical());
  for (auto _ : state) benchmark::DoNotOptimize(robinf::to_joint(chain));
}
BENCHMARK(BM_ToJoint);

void BM_RunCase(benchmark::State& state) {
  auto config = robinf::ScenarioConfig::defaults(static_cast<robinf::Scenario>(state.range(0)));
  const std::size_t middle = config.ranges.size() / 2;
  std::size_t index = 0;
  for (auto _ : state) benchmark::DoNotOptimize(robinf::run_case(config, middle, index++ % config.cases));
}
BENCHMARK(BM_RunCase)->DenseRange(0, 3)->ArgName("scenario");

void BM_Sweep(benchmark::State& state) {
  auto config = robinf::ScenarioConfig::defaults(robinf::Scenario::prototypical);
  config.cases = static_cast<std::size_t>(state.range(0));
  config.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(robinf::run_sweep(config));
  state.SetItemsProcessed(state.iterations() * config.cases * config.ranges.size());
}
BENCHMARK(BM_Sweep)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
