#include "barvf/envs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "barvf/errors.hpp"

namespace barvf::envs {

namespace {

int sample_row(const double* probs, int n, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  // Round-off tail: fall back to the last positive entry.
  for (int i = n - 1; i >= 0; --i)
    if (probs[i] > 0.0) return i;
  return n - 1;
}

}  // namespace

void TabularMdp::validate() const {
  if (num_states < 1 || num_actions < 1) throw InvalidInputError("TabularMdp: empty state or action space");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidInputError("TabularMdp: gamma must be in [0,1)");
  if (horizon < 1) throw InvalidInputError("TabularMdp: horizon must be >= 1");
  for (int s = 0; s < num_states; ++s) {
    for (int a = 0; a < num_actions; ++a) {
      double sum = 0.0;
      for (int s2 = 0; s2 < num_states; ++s2) {
        const double p = transition(s, a, s2);
        if (!(p >= 0.0)) throw InvalidInputError("TabularMdp: negative transition probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-12) throw InvalidInputError("TabularMdp: transition row does not sum to 1");
      const double r = reward(s, a);
      if (!(r >= 0.0 && r <= 1.0)) throw InvalidInputError("TabularMdp: reward outside [0,1]");
    }
  }
  double init_sum = 0.0;
  for (double p : initial_dist) {
    if (!(p >= 0.0)) throw InvalidInputError("TabularMdp: negative initial probability");
    init_sum += p;
  }
  if (std::abs(init_sum - 1.0) > 1e-12) throw InvalidInputError("TabularMdp: initial distribution does not sum to 1");
}

TabularMdp river_swim(int n_states, double p_right, double p_stay, double left_reward,
                      double right_reward, int horizon) {
  if (n_states < 2) throw InvalidInputError("river_swim: need at least 2 states");
  if (!(p_right >= 0.0 && p_stay >= 0.0 && p_right + p_stay <= 1.0 + 1e-15))
    throw InvalidInputError("river_swim: invalid transition probabilities");
  if (!(left_reward >= 0.0 && left_reward <= 1.0 && right_reward >= 0.0 && right_reward <= 1.0))
    throw InvalidInputError("river_swim: rewards must lie in [0,1]");
  if (horizon < 1) throw InvalidInputError("river_swim: horizon must be >= 1");

  const double p_slip = 1.0 - p_right - p_stay;
  TabularMdp mdp;
  mdp.num_states = n_states;
  mdp.num_actions = 2;  // 0 = left, 1 = right
  mdp.horizon = horizon;
  mdp.transitions.assign(static_cast<std::size_t>(n_states) * 2 * n_states, 0.0);
  mdp.rewards.assign(static_cast<std::size_t>(n_states) * 2, 0.0);
  mdp.initial_dist.assign(n_states, 0.0);
  mdp.initial_dist[0] = 1.0;
  mdp.terminal.assign(n_states, false);

  for (int s = 0; s < n_states; ++s) {
    mdp.transition(s, 0, std::max(s - 1, 0)) = 1.0;
    // Right: moves off either end fold into staying put.
    const int fwd = std::min(s + 1, n_states - 1);
    const int back = std::max(s - 1, 0);
    mdp.transition(s, 1, fwd) += p_right;
    mdp.transition(s, 1, s) += p_stay;
    mdp.transition(s, 1, back) += p_slip;
  }
  mdp.reward(0, 0) = left_reward;
  mdp.reward(n_states - 1, 1) = right_reward;
  return mdp;
}

TabularMdp confluence_swim(int horizon) {
  constexpr int kRiverLength = 5;
  if (horizon < 2 * (kRiverLength + 1)) throw InvalidInputError("confluence_swim: horizon too small");

  // Currents and end rewards per river, ordered easy -> medium -> hard.
  const double p_right[3] = {0.9, 0.6, 0.3};
  const double p_stay[3] = {0.1, 0.3, 0.6};
  const double end_reward[3] = {0.1, 0.35, 1.0};
  constexpr double kLeftReward = 0.005;

  const int n = 1 + 3 * kRiverLength;
  TabularMdp mdp;
  mdp.num_states = n;
  mdp.num_actions = 3;  // in rivers: 0 = left, 1 = right, 2 = no-op; at the hub: enter river a
  mdp.horizon = horizon;
  mdp.transitions.assign(static_cast<std::size_t>(n) * 3 * n, 0.0);
  mdp.rewards.assign(static_cast<std::size_t>(n) * 3, 0.0);
  mdp.initial_dist.assign(n, 0.0);
  mdp.initial_dist[0] = 1.0;
  mdp.terminal.assign(n, false);

  for (int r = 0; r < 3; ++r) {
    const int base = 1 + r * kRiverLength;  // leftmost state of river r
    mdp.transition(0, r, base) = 1.0;       // hub entry, deterministic and irreversible
    const double slip = std::max(0.0, 1.0 - p_right[r] - p_stay[r]);
    for (int i = 0; i < kRiverLength; ++i) {
      const int s = base + i;
      const int left = (i == 0) ? s : s - 1;  // no way back to the hub
      const int fwd = (i == kRiverLength - 1) ? s : s + 1;
      mdp.transition(s, 0, left) = 1.0;
      mdp.transition(s, 1, fwd) += p_right[r];
      mdp.transition(s, 1, s) += p_stay[r];
      mdp.transition(s, 1, left) += slip;
      mdp.transition(s, 2, s) = 1.0;
    }
    mdp.reward(base, 0) = kLeftReward;
    mdp.reward(base + kRiverLength - 1, 1) = end_reward[r];
  }
  return mdp;
}

namespace {

// Shared grid machinery: states are (cell, heading) with headings
// 0 = north, 1 = east, 2 = south, 3 = west and actions
// 0 = rotate-left, 1 = rotate-right, 2 = forward.
struct GridSpec {
  int num_cells = 0;
  std::vector<int> forward_cell;     // num_cells * 4; -1 means blocked
  std::vector<double> goal_reward;   // num_cells; 0 for non-goals
  std::vector<bool> goal;            // num_cells
  int start_cell = 0;
  int start_heading = 1;
};

TabularMdp build_grid(const GridSpec& g) {
  const int n = g.num_cells * 4;
  TabularMdp mdp;
  mdp.num_states = n;
  mdp.num_actions = 3;
  mdp.horizon = 100;
  mdp.transitions.assign(static_cast<std::size_t>(n) * 3 * n, 0.0);
  mdp.rewards.assign(static_cast<std::size_t>(n) * 3, 0.0);
  mdp.initial_dist.assign(n, 0.0);
  mdp.initial_dist[g.start_cell * 4 + g.start_heading] = 1.0;
  mdp.terminal.assign(n, false);

  for (int c = 0; c < g.num_cells; ++c) {
    for (int h = 0; h < 4; ++h) {
      const int s = c * 4 + h;
      if (g.goal[c]) mdp.terminal[s] = true;
      mdp.transition(s, 0, c * 4 + (h + 3) % 4) = 1.0;
      mdp.transition(s, 1, c * 4 + (h + 1) % 4) = 1.0;
      const int fwd = g.forward_cell[c * 4 + h];
      if (fwd < 0) {
        mdp.transition(s, 2, s) = 1.0;  // blocked move, state unchanged
      } else {
        mdp.transition(s, 2, fwd * 4 + h) = 1.0;
        mdp.reward(s, 2) = g.goal_reward[fwd];
      }
    }
  }
  return mdp;
}

GridSpec empty_grid_spec() {
  constexpr int kSide = 8;
  GridSpec g;
  g.num_cells = kSide * kSide;
  g.forward_cell.assign(g.num_cells * 4, -1);
  g.goal_reward.assign(g.num_cells, 0.0);
  g.goal.assign(g.num_cells, false);
  g.start_cell = 0;
  g.start_heading = 1;
  const int dr[4] = {-1, 0, 1, 0};
  const int dc[4] = {0, 1, 0, -1};
  for (int r = 0; r < kSide; ++r) {
    for (int c = 0; c < kSide; ++c) {
      for (int h = 0; h < 4; ++h) {
        const int nr = r + dr[h];
        const int nc = c + dc[h];
        if (nr >= 0 && nr < kSide && nc >= 0 && nc < kSide)
          g.forward_cell[(r * kSide + c) * 4 + h] = nr * kSide + nc;
      }
    }
  }
  g.goal[kSide * kSide - 1] = true;
  g.goal_reward[kSide * kSide - 1] = 1.0;
  return g;
}

GridSpec corridor_grid_spec() {
  // A 12-cell walkway with three terminal goal alcoves hanging off it at
  // offsets 3, 6, and 9; farther goals pay more. Cells 0..11 are the
  // walkway, 12..14 the goal alcoves.
  constexpr int kWalkway = 12;
  const int goal_cols[3] = {3, 6, 9};
  const double goal_rewards[3] = {0.33, 0.66, 1.0};
  GridSpec g;
  g.num_cells = kWalkway + 3;
  g.forward_cell.assign(g.num_cells * 4, -1);
  g.goal_reward.assign(g.num_cells, 0.0);
  g.goal.assign(g.num_cells, false);
  g.start_cell = 0;
  g.start_heading = 1;
  for (int c = 0; c < kWalkway; ++c) {
    if (c + 1 < kWalkway) g.forward_cell[c * 4 + 1] = c + 1;  // east
    if (c - 1 >= 0) g.forward_cell[c * 4 + 3] = c - 1;        // west
  }
  for (int i = 0; i < 3; ++i) {
    const int alcove = kWalkway + i;
    g.forward_cell[goal_cols[i] * 4 + 2] = alcove;  // south off the walkway
    g.goal[alcove] = true;
    g.goal_reward[alcove] = goal_rewards[i];
  }
  return g;
}

}  // namespace

TabularMdp grid_env(GridKind kind) {
  return build_grid(kind == GridKind::kEmpty ? empty_grid_spec() : corridor_grid_spec());
}

TabularMdp make_env(std::string_view name) {
  if (name == "riverswim") return river_swim();
  if (name == "confluence") return confluence_swim();
  if (name == "empty-grid") return grid_env(GridKind::kEmpty);
  if (name == "corridor-grid") return grid_env(GridKind::kCorridor);
  throw InvalidInputError("unknown environment: " + std::string(name));
}

int reset(const TabularMdp& mdp, Rng& rng) {
  return sample_row(mdp.initial_dist.data(), mdp.num_states, rng);
}

StepOutcome step(const TabularMdp& mdp, int state, int action, Rng& rng) {
  if (state < 0 || state >= mdp.num_states) throw InvalidInputError("step: state out of range");
  if (action < 0 || action >= mdp.num_actions) throw InvalidInputError("step: action out of range");
  if (mdp.is_terminal(state)) throw InvalidInputError("step: called on a terminal state");
  const double* row =
      &mdp.transitions[(static_cast<std::size_t>(state) * mdp.num_actions + action) * mdp.num_states];
  StepOutcome out;
  out.next_state = sample_row(row, mdp.num_states, rng);
  out.reward = mdp.reward(state, action);
  out.done = mdp.is_terminal(out.next_state);
  return out;
}

QFunction optimal_q(const TabularMdp& mdp, double tol) {
  if (!(tol > 0.0)) throw InvalidInputError("optimal_q: tol must be > 0");
  const int S = mdp.num_states;
  const int A = mdp.num_actions;
  QFunction q(S, A);
  QFunction next(S, A);
  std::vector<double> v(S, 0.0);
  // Synchronous backups: the sup-norm change per sweep is exactly the Bellman
  // residual of the previous iterate, so stopping when it drops below tol
  // leaves the returned iterate with residual below gamma * tol.
  double residual = std::numeric_limits<double>::infinity();
  while (residual >= tol) {
    for (int s = 0; s < S; ++s) {
      if (mdp.is_terminal(s)) {
        v[s] = 0.0;
        continue;
      }
      double best = q.at(s, 0);
      for (int a = 1; a < A; ++a) best = std::max(best, q.at(s, a));
      v[s] = best;
    }
    residual = 0.0;
    for (int s = 0; s < S; ++s) {
      if (mdp.is_terminal(s)) continue;
      for (int a = 0; a < A; ++a) {
        double exp_v = 0.0;
        const double* row = &mdp.transitions[(static_cast<std::size_t>(s) * A + a) * S];
        for (int s2 = 0; s2 < S; ++s2)
          if (row[s2] > 0.0) exp_v += row[s2] * v[s2];
        const double backed_up = mdp.reward(s, a) + mdp.gamma * exp_v;
        residual = std::max(residual, std::abs(backed_up - q.at(s, a)));
        next.at(s, a) = backed_up;
      }
    }
    std::swap(q.values, next.values);
  }
  return q;
}

std::string mdp_summary_json(const TabularMdp& mdp) {
  int nonzero_rewards = 0;
  for (double r : mdp.rewards)
    if (r != 0.0) ++nonzero_rewards;
  int terminal_count = 0;
  for (bool t : mdp.terminal)
    if (t) ++terminal_count;
  nlohmann::json j{
      {"num_states", mdp.num_states},
      {"num_actions", mdp.num_actions},
      {"gamma", mdp.gamma},
      {"horizon", mdp.horizon},
      {"terminal_states", terminal_count},
      {"nonzero_reward_entries", nonzero_rewards},
      {"reward_sparsity",
       1.0 - static_cast<double>(nonzero_rewards) / static_cast<double>(mdp.rewards.size())},
  };
  return j.dump(2);
}

}  // namespace barvf::envs
