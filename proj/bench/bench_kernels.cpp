// Serial reference vs OpenMP paths for the data-parallel kernels and for
// independent seed batches.
#include <benchmark/benchmark.h>

#include "blb/config.hpp"
#include "blb/experiment.hpp"
#include "blb/kernels.hpp"
#include "blb/oracle.hpp"

namespace {

blb::TabularMDP dense_mdp(std::size_t states, std::size_t actions) {
  blb::Rng rng = blb::make_rng(states, actions);
  blb::TabularMDP mdp(states, actions);
  for (blb::StateId s = 0; s < states; ++s) {
    for (blb::ActionId a = 0; a < actions; ++a) {
      auto row = mdp.transition(s, a);
      double total = 0.0;
      for (double& p : row) total += (p = blb::uniform01(rng));
      for (double& p : row) p /= total;
      mdp.set_reward(s, a, blb::uniform01(rng));
    }
  }
  return mdp;
}

void sweep(benchmark::State& state, blb::Execution exec) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const blb::TabularMDP mdp = dense_mdp(n, 4);
  std::vector<double> u(n, 0.0), next(n);
  std::vector<blb::ActionId> greedy(n);
  for (auto _ : state) {
    auto inc = blb::bellman_sweep(mdp, u, next, greedy, 0.5, exec);
    benchmark::DoNotOptimize(inc);
    u.swap(next);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n * 4));
}

void BM_BellmanSweepSerial(benchmark::State& s) { sweep(s, blb::Execution::serial); }
void BM_BellmanSweepParallel(benchmark::State& s) { sweep(s, blb::Execution::parallel); }
BENCHMARK(BM_BellmanSweepSerial)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_BellmanSweepParallel)->Arg(64)->Arg(256)->Arg(1024);

void diameter_bench(benchmark::State& state, blb::Execution exec) {
  const blb::TabularMDP mdp = dense_mdp(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(blb::diameter(mdp, 1e-8, exec));
}

void BM_DiameterSerial(benchmark::State& s) { diameter_bench(s, blb::Execution::serial); }
void BM_DiameterParallel(benchmark::State& s) { diameter_bench(s, blb::Execution::parallel); }
BENCHMARK(BM_DiameterSerial)->Arg(32)->Arg(64);
BENCHMARK(BM_DiameterParallel)->Arg(32)->Arg(64);

void seeds_bench(benchmark::State& state, blb::Execution exec) {
  blb::ExperimentConfig config;
  config.environment.kind = "two_state_example";
  config.environment.mdp = blb::mdps::two_state_example();
  config.environment.noise_bits = 1;
  blb::RepresentationConfig markov{"partition", blb::state_projection(2, 1), true,
                                   blb::mdps::two_state_example()};
  blb::RepresentationConfig noise{"partition", blb::noise_projection(2, 1), false, std::nullopt};
  config.representations = {markov, noise};
  config.blb.bound_scale = 0.01;
  const blb::Experiment exp = blb::build_experiment(config);
  std::vector<std::uint64_t> seeds(8);
  for (std::size_t k = 0; k < seeds.size(); ++k) seeds[k] = k + 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        blb::run_seeds(exp, config.blb, 0.75, static_cast<std::uint64_t>(state.range(0)), seeds,
                       exec));
  }
}

void BM_SeedBatchSerial(benchmark::State& s) { seeds_bench(s, blb::Execution::serial); }
void BM_SeedBatchParallel(benchmark::State& s) { seeds_bench(s, blb::Execution::parallel); }
BENCHMARK(BM_SeedBatchSerial)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SeedBatchParallel)->Arg(4096)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
