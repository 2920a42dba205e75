#include <benchmark/benchmark.h>

#include <vector>

#include "ghzmp/lhv.hpp"
#include "ghzmp/paradox.hpp"
#include "ghzmp/quantum.hpp"

namespace {

using namespace ghzmp;

PhaseSettings graded(int particles, int ports) {
  std::vector<std::vector<PhaseAngle>> rows(static_cast<std::size_t>(particles));
  for (int l = 0; l < particles; ++l) {
    for (int m = 0; m < ports; ++m) rows[static_cast<std::size_t>(l)].push_back(PhaseAngle::from_turns(m * (l + 1), 7 * ports));
  }
  return PhaseSettings(std::move(rows));
}

void BM_CorrelationClosed(benchmark::State& state) {
  const ExperimentConfig cfg{static_cast<int>(state.range(0)), static_cast<int>(state.range(1))};
  const PhaseSettings s = graded(cfg.particles, cfg.ports);
  for (auto _ : state) benchmark::DoNotOptimize(correlation_closed(cfg, s));
}
BENCHMARK(BM_CorrelationClosed)->Args({4, 3})->Args({12, 11})->Args({64, 63});

void BM_CorrelationBrute(benchmark::State& state) {
  const ExperimentConfig cfg{static_cast<int>(state.range(0)), static_cast<int>(state.range(1))};
  const PhaseSettings s = graded(cfg.particles, cfg.ports);
  for (auto _ : state) benchmark::DoNotOptimize(correlation_brute(cfg, s));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.outcome_count()));
}
BENCHMARK(BM_CorrelationBrute)->Args({4, 3})->Args({5, 4})->Args({6, 5});

void BM_FullDistribution(benchmark::State& state) {
  const ExperimentConfig cfg{static_cast<int>(state.range(0)), static_cast<int>(state.range(1))};
  const PhaseSettings s = graded(cfg.particles, cfg.ports);
  for (auto _ : state) benchmark::DoNotOptimize(full_distribution(cfg, s));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.outcome_count()));
}
BENCHMARK(BM_FullDistribution)->Args({4, 3})->Args({6, 5})->Args({8, 7});

void BM_CountSatisfying(benchmark::State& state) {
  const ParadoxScenario s = build_scenario(static_cast<int>(state.range(0)));
  const auto constraints = s.all_constraints();
  for (auto _ : state) benchmark::DoNotOptimize(count_satisfying(s.catalog, constraints));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.catalog.model_count()));
}
BENCHMARK(BM_CountSatisfying)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_RunParadoxAlgebraic(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(run_paradox(static_cast<int>(state.range(0)), {.skip_enumeration = true}));
}
BENCHMARK(BM_RunParadoxAlgebraic)->Arg(4)->Arg(12)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
