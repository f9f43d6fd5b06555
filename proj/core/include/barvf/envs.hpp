#ifndef BARVF_ENVS_HPP
#define BARVF_ENVS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "barvf/qfunction.hpp"
#include "barvf/rng.hpp"

namespace barvf::envs {

/// Finite MDP with unit-interval rewards and an episode step cap. Transition
/// probabilities are row-major over (state, action, next_state).
struct TabularMdp {
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> transitions;   // S * A * S
  std::vector<double> rewards;       // S * A, all in [0, 1]
  std::vector<double> initial_dist;  // length S
  double gamma = 0.99;
  int horizon = 1;
  std::vector<bool> terminal;        // length S

  double transition(int s, int a, int s2) const {
    return transitions[(static_cast<std::size_t>(s) * num_actions + a) * num_states + s2];
  }
  double& transition(int s, int a, int s2) {
    return transitions[(static_cast<std::size_t>(s) * num_actions + a) * num_states + s2];
  }
  double reward(int s, int a) const { return rewards[static_cast<std::size_t>(s) * num_actions + a]; }
  double& reward(int s, int a) { return rewards[static_cast<std::size_t>(s) * num_actions + a]; }
  bool is_terminal(int s) const { return terminal[s]; }

  void validate() const;
};

struct StepOutcome {
  int next_state = 0;
  double reward = 0.0;
  bool done = false;  // terminal successor; the horizon cap is the episode loop's duty
};

/// Chain MDP with actions {left, right}. Left walks deterministically toward
/// state 0; right advances with p_right, stays with p_stay, and slips left
/// with the remainder. Moves off either end fold into staying put.
TabularMdp river_swim(int n_states = 6, double p_right = 0.3, double p_stay = 0.6,
                      double left_reward = 0.005, double right_reward = 1.0, int horizon = 20);

/// Three rivers of increasing difficulty joined at a hub state. Hub action i
/// deterministically enters river i at its leftmost state; entry is
/// irreversible within an episode. In-river actions: 0 = left, 1 = right,
/// 2 = no-op. End rewards grow with the strength of the current.
TabularMdp confluence_swim(int horizon = 40);

enum class GridKind { kEmpty, kCorridor };

/// Fully observable deterministic gridworld over (cell, heading) states with
/// actions {rotate-left, rotate-right, forward}. Empty: one terminal goal of
/// reward 1. Corridor: three terminal goals with rewards growing with
/// distance from the start. Horizon 100.
TabularMdp grid_env(GridKind kind);

/// Construct an environment by its CLI name: riverswim, confluence,
/// empty-grid, corridor-grid.
TabularMdp make_env(std::string_view name);

/// Initial state drawn from the MDP's initial distribution.
int reset(const TabularMdp& mdp, Rng& rng);

StepOutcome step(const TabularMdp& mdp, int state, int action, Rng& rng);

/// Value iteration to sup-norm Bellman residual below tol. Terminal states
/// have value 0.
QFunction optimal_q(const TabularMdp& mdp, double tol = 1e-10);

/// Inspection dump (dimensions, gamma, horizon, reward sparsity) as JSON.
std::string mdp_summary_json(const TabularMdp& mdp);

}  // namespace barvf::envs

#endif  // BARVF_ENVS_HPP
