#ifndef BARVF_AGENTS_HPP
#define BARVF_AGENTS_HPP

#include <cstdint>
#include <string_view>
#include <vector>

#include "barvf/envs.hpp"
#include "barvf/posterior.hpp"
#include "barvf/qfunction.hpp"
#include "barvf/rng.hpp"

namespace barvf::agents {

enum class AgentKind { kBaseline, kRvf, kBaRvf };

AgentKind agent_kind_from_name(std::string_view name);  // baseline | rvf | ba-rvf
std::string_view agent_name(AgentKind kind);

/// Linear epsilon decay: max_eps until warmup, then decaying by decay_rate per
/// environment step, floored at min_eps.
struct EpsSchedule {
  double max_eps = 1.0;
  double min_eps = 0.0;
  std::int64_t warmup_steps = 100;
  double decay_rate = 0.0;
};

double epsilon_at(const EpsSchedule& sched, std::int64_t step);

/// Decay rate covering 95% of the remaining steps after warmup.
double default_decay_rate(std::int64_t total_steps, std::int64_t warmup_steps);

struct AgentSpec {
  AgentKind kind = AgentKind::kRvf;
  double beta = 0.0;      // ba-rvf only
  int z_samples = 32;     // ba-rvf only
  EpsSchedule epsilon;    // baseline only
  bool episode_batched_updates = false;  // apply posterior updates at episode end

  void validate() const;
};

struct EpisodeResult {
  double undiscounted_return = 0.0;
  int steps = 0;
  double mean_rate = 0.0;        // nats; ba-rvf only, else 0
  double mean_distortion = 0.0;  // ba-rvf only, else 0
  std::vector<int> actions;
};

/// Argmax of q(state, .) with uniform random tie breaking.
int greedy_action(const QFunction& q, int state, Rng& rng);

struct BaActionResult {
  int action = 0;
  double rate = 0.0;
  double distortion = 0.0;
};

/// One compression step: assemble [pinned, Z-1 fresh posterior draws], solve
/// the channel at `beta` under the uniform plug-in source, and sample the
/// action from the pinned sample's conditional row.
BaActionResult ba_rvf_action(const posterior::EnsemblePosterior& post, const QFunction& pinned,
                             int state, double beta, int z_samples, Rng& rng);

/// Everything one run mutates across episodes: the shared ensemble posterior,
/// the baseline's plain Q table, and the global step counter driving the
/// epsilon schedule.
struct RunState {
  posterior::EnsemblePosterior posterior;
  QFunction baseline_q;
  std::int64_t global_step = 0;

  RunState(int num_states, int num_actions, const posterior::PosteriorConfig& cfg, Rng& rng)
      : posterior(num_states, num_actions, cfg, rng), baseline_q(num_states, num_actions) {}
};

EpisodeResult run_episode(const AgentSpec& spec, const envs::TabularMdp& mdp, RunState& state,
                          int episode_index, Rng& rng);

}  // namespace barvf::agents

#endif  // BARVF_AGENTS_HPP
