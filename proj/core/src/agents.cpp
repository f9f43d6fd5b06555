#include "barvf/agents.hpp"

#include <algorithm>
#include <cmath>

#include "barvf/errors.hpp"
#include "barvf/rate_distortion.hpp"

namespace barvf::agents {

AgentKind agent_kind_from_name(std::string_view name) {
  if (name == "baseline") return AgentKind::kBaseline;
  if (name == "rvf") return AgentKind::kRvf;
  if (name == "ba-rvf") return AgentKind::kBaRvf;
  throw InvalidInputError("unknown agent: " + std::string(name));
}

std::string_view agent_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::kBaseline: return "baseline";
    case AgentKind::kRvf: return "rvf";
    case AgentKind::kBaRvf: return "ba-rvf";
  }
  return "?";
}

double epsilon_at(const EpsSchedule& sched, std::int64_t step) {
  if (step < sched.warmup_steps) return sched.max_eps;
  const double eps = sched.max_eps - sched.decay_rate * static_cast<double>(step - sched.warmup_steps);
  return std::max(sched.min_eps, eps);
}

double default_decay_rate(std::int64_t total_steps, std::int64_t warmup_steps) {
  const double span = 0.95 * static_cast<double>(total_steps - warmup_steps);
  return span > 0.0 ? 1.0 / span : 1.0;
}

void AgentSpec::validate() const {
  if (!(beta >= 0.0)) throw InvalidInputError("AgentSpec: beta must be >= 0");
  if (z_samples < 2) throw InvalidInputError("AgentSpec: z_samples must be >= 2");
  if (!(epsilon.min_eps >= 0.0 && epsilon.min_eps <= epsilon.max_eps && epsilon.max_eps <= 1.0))
    throw InvalidInputError("AgentSpec: need 0 <= min_eps <= max_eps <= 1");
}

int greedy_action(const QFunction& q, int state, Rng& rng) {
  double best = q.at(state, 0);
  for (int a = 1; a < q.num_actions; ++a) best = std::max(best, q.at(state, a));
  int tie_count = 0;
  int choice = 0;
  // Reservoir-style uniform pick among exact ties.
  for (int a = 0; a < q.num_actions; ++a) {
    if (q.at(state, a) == best) {
      ++tie_count;
      if (tie_count == 1) {
        choice = a;
      } else {
        std::uniform_int_distribution<int> pick(1, tie_count);
        if (pick(rng) == 1) choice = a;
      }
    }
  }
  return choice;
}

BaActionResult ba_rvf_action(const posterior::EnsemblePosterior& post, const QFunction& pinned,
                             int state, double beta, int z_samples, Rng& rng) {
  if (z_samples < 2) throw InvalidInputError("ba_rvf_action: z_samples must be >= 2");
  if (pinned.num_states != post.num_states() || pinned.num_actions != post.num_actions())
    throw ShapeError("ba_rvf_action: pinned sample shape does not match posterior");

  std::vector<QFunction> samples;
  samples.reserve(z_samples);
  samples.push_back(pinned);
  for (int z = 1; z < z_samples; ++z) samples.push_back(post.sample(rng).second);

  const rd::DistortionMatrix d = rd::build_distortion_matrix(samples, state);
  const rd::SourceDistribution source = rd::SourceDistribution::uniform(z_samples);
  rd::BAConfig cfg;
  cfg.beta = beta;
  const rd::ChannelSolution sol = rd::blahut_arimoto(d, source, cfg);

  // Act from the pinned sample's row of the converged channel.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double acc = 0.0;
  int action = post.num_actions() - 1;
  for (int a = 0; a < post.num_actions(); ++a) {
    acc += sol.cond(0, a);
    if (u < acc) {
      action = a;
      break;
    }
  }
  return {action, sol.rate, sol.expected_distortion};
}

EpisodeResult run_episode(const AgentSpec& spec, const envs::TabularMdp& mdp, RunState& state,
                          int episode_index, Rng& rng) {
  (void)episode_index;
  spec.validate();
  if (state.posterior.num_states() != mdp.num_states ||
      state.posterior.num_actions() != mdp.num_actions)
    throw ShapeError("run_episode: posterior shape does not match environment");

  QFunction pinned;
  if (spec.kind != AgentKind::kBaseline) pinned = state.posterior.sample(rng).second;

  const posterior::PosteriorConfig& pcfg = state.posterior.config();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> uniform_action(0, mdp.num_actions - 1);

  EpisodeResult result;
  std::vector<posterior::Transition> pending;  // episode-batched posterior updates
  double rate_sum = 0.0;
  double dist_sum = 0.0;
  int s = envs::reset(mdp, rng);

  for (int t = 0; t < mdp.horizon; ++t) {
    int action = 0;
    switch (spec.kind) {
      case AgentKind::kBaseline: {
        const double eps = epsilon_at(spec.epsilon, state.global_step);
        action = unit(rng) < eps ? uniform_action(rng) : greedy_action(state.baseline_q, s, rng);
        break;
      }
      case AgentKind::kRvf:
        action = greedy_action(pinned, s, rng);
        break;
      case AgentKind::kBaRvf: {
        const BaActionResult ba =
            ba_rvf_action(state.posterior, pinned, s, spec.beta, spec.z_samples, rng);
        action = ba.action;
        rate_sum += ba.rate;
        dist_sum += ba.distortion;
        break;
      }
    }

    const envs::StepOutcome out = envs::step(mdp, s, action, rng);
    result.undiscounted_return += out.reward;
    result.actions.push_back(action);
    ++result.steps;
    ++state.global_step;

    const posterior::Transition transition{s, action, out.reward, out.next_state, out.done};
    if (spec.episode_batched_updates) {
      pending.push_back(transition);
    } else {
      state.posterior.update(transition, rng);
    }
    if (spec.kind == AgentKind::kBaseline) {
      double bootstrap = 0.0;
      if (!out.done) {
        bootstrap = state.baseline_q.at(out.next_state, 0);
        for (int a = 1; a < mdp.num_actions; ++a)
          bootstrap = std::max(bootstrap, state.baseline_q.at(out.next_state, a));
      }
      const double target = out.reward + pcfg.gamma * bootstrap;
      state.baseline_q.at(s, action) += pcfg.step_size * (target - state.baseline_q.at(s, action));
    }

    s = out.next_state;
    if (out.done) break;
  }

  for (const posterior::Transition& transition : pending) state.posterior.update(transition, rng);

  if (spec.kind == AgentKind::kBaRvf && result.steps > 0) {
    result.mean_rate = rate_sum / result.steps;
    result.mean_distortion = dist_sum / result.steps;
  }
  return result;
}

}  // namespace barvf::agents
