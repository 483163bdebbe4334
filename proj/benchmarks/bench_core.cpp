#include <benchmark/benchmark.h>

#include <vector>

#include "wealthsim/dynamics.hpp"
#include "wealthsim/fiscal.hpp"
#include "wealthsim/harness.hpp"
#include "wealthsim/metrics.hpp"
#include "wealthsim/returns.hpp"

using namespace wealthsim;

static void BM_FillNormalReturns(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  StreamSet streams(2019, 0, Channel::Returns, n);
  std::vector<double> r(n);
  for (auto _ : state) {
    streams.fill_returns(NormalReturns{}, r);
    benchmark::DoNotOptimize(r.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FillNormalReturns)->Arg(1000)->Arg(5000)->Arg(20000);

static void BM_FillGammaReturns(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  StreamSet streams(2019, 0, Channel::Returns, n);
  std::vector<double> r(n);
  for (auto _ : state) {
    streams.fill_returns(GammaReturns{}, r);
    benchmark::DoNotOptimize(r.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FillGammaReturns)->Arg(1000)->Arg(5000);

static void BM_StepCompound(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto pop = PopulationState::uniform(n, 10.0);
  std::vector<double> r(n);
  StreamSet(1, 0, Channel::Returns, n).fill_returns(NormalReturns{0.0, 0.01}, r);
  for (auto _ : state) {
    step_compound(pop, r);
    benchmark::DoNotOptimize(pop.wealth.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StepCompound)->Arg(1000)->Arg(5000);

static std::vector<double> lognormal_population(std::size_t n) {
  auto pop = PopulationState::uniform(n, 10.0);
  StreamSet streams(3, 0, Channel::Returns, n);
  std::vector<double> r(n);
  for (int t = 0; t < 500; ++t) {
    streams.fill_returns(NormalReturns{}, r);
    step_compound(pop, r);
  }
  return pop.wealth;
}

static void BM_Gini(benchmark::State& state) {
  const auto w = lognormal_population(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gini(w));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Gini)->Arg(1000)->Arg(5000);

static void BM_Measure(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto prev = lognormal_population(n);
  auto now = prev;
  for (std::size_t i = 0; i < n; i += 7) now[i] *= 1.1;
  const auto prev_map = decile_map(prev);
  DecileMap now_map;
  for (auto _ : state) {
    auto rec = measure(1, now, &prev_map, 1.0, &now_map);
    benchmark::DoNotOptimize(rec);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Measure)->Arg(1000)->Arg(5000);

static void BM_ApplyFiscal(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  PopulationState base;
  base.t = 1;
  base.prev_wealth = lognormal_population(n);
  base.wealth = base.prev_wealth;
  for (std::size_t i = 0; i < n; i += 2) base.wealth[i] *= 1.05;
  const TaxPolicy policy{LevyMode::Progressive, RedistributionMode::RegressiveWelfare, 0.10};
  for (auto _ : state) {
    auto s = base;
    benchmark::DoNotOptimize(apply_fiscal(s, policy));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ApplyFiscal)->Arg(1000)->Arg(5000);

static void BM_Replication(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.agents = 1000;
  cfg.t_max = 200;
  cfg.replications = 1;
  for (auto _ : state) {
    auto r = simulate_replication(cfg, cfg.scenarios.front(), 0);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * 1000 * 200);
}
BENCHMARK(BM_Replication)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
