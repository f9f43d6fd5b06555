#include <benchmark/benchmark.h>

#include <random>

#include "barvf/agents.hpp"
#include "barvf/envs.hpp"
#include "barvf/rate_distortion.hpp"

namespace {

using namespace barvf;

rd::DistortionMatrix random_matrix(int z, int a, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gap(0.0, 4.0);
  std::uniform_int_distribution<int> zero_col(0, a - 1);
  rd::DistortionMatrix d(z, a);
  for (int i = 0; i < z; ++i) {
    const int zc = zero_col(rng);
    for (int j = 0; j < a; ++j) d.at(i, j) = j == zc ? 0.0 : gap(rng);
  }
  return d;
}

void BM_BlahutArimoto(benchmark::State& state) {
  const int z = static_cast<int>(state.range(0));
  const int a = static_cast<int>(state.range(1));
  const double beta = static_cast<double>(state.range(2));
  const auto d = random_matrix(z, a, 7);
  const auto source = rd::SourceDistribution::uniform(z);
  rd::BAConfig cfg;
  cfg.beta = beta;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rd::blahut_arimoto(d, source, cfg));
  }
}
BENCHMARK(BM_BlahutArimoto)
    ->Args({8, 4, 1})
    ->Args({32, 3, 1})
    ->Args({32, 3, 100})
    ->Args({32, 3, 1000000})
    ->Args({64, 8, 100});

void BM_BaRvfEpisode(benchmark::State& state) {
  const envs::TabularMdp mdp = envs::confluence_swim();
  posterior::PosteriorConfig pcfg;
  agents::AgentSpec spec;
  spec.kind = agents::AgentKind::kBaRvf;
  spec.beta = static_cast<double>(state.range(0));
  Rng init_rng(1);
  Rng rng(2);
  agents::RunState run_state(mdp.num_states, mdp.num_actions, pcfg, init_rng);
  int episode = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(agents::run_episode(spec, mdp, run_state, episode++, rng));
  }
}
BENCHMARK(BM_BaRvfEpisode)->Arg(1)->Arg(1000)->Arg(1000000);

void BM_ValueIteration(benchmark::State& state) {
  const envs::TabularMdp mdp = envs::grid_env(envs::GridKind::kEmpty);
  for (auto _ : state) {
    benchmark::DoNotOptimize(envs::optimal_q(mdp, 1e-8));
  }
}
BENCHMARK(BM_ValueIteration);

}  // namespace

BENCHMARK_MAIN();
