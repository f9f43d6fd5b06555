#ifndef BARVF_POSTERIOR_HPP
#define BARVF_POSTERIOR_HPP

#include <string>
#include <utility>
#include <vector>

#include "barvf/qfunction.hpp"
#include "barvf/rng.hpp"

namespace barvf::posterior {

struct Transition {
  int state = 0;
  int action = 0;
  double reward = 0.0;
  int next_state = 0;
  bool done = false;
};

struct PosteriorConfig {
  int member_count = 30;
  double prior_scale = 0.1;
  double noise_scale = 0.1;  // std. dev. of the Gaussian target perturbation
  double step_size = 0.1;
  double gamma = 0.99;
};

/// Ensemble approximation of the posterior over the optimal action-value
/// function: M learned tables plus M fixed random prior tables drawn once at
/// construction. A member's effective value is learned + prior_scale * prior.
/// Updates regress every member toward its own noise-perturbed TD(0) target.
class EnsemblePosterior {
 public:
  EnsemblePosterior(int num_states, int num_actions, const PosteriorConfig& cfg, Rng& rng);

  /// Uniformly drawn member index with a copy of its effective Q table.
  std::pair<int, QFunction> sample(Rng& rng) const;

  /// Effective Q of one member at one entry.
  double member_q(int m, int s, int a) const;

  /// Noise-perturbed TD(0) step on every member.
  void update(const Transition& t, Rng& rng);

  int member_count() const { return static_cast<int>(learned_.size()); }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  const PosteriorConfig& config() const { return cfg_; }
  const std::vector<QFunction>& priors() const { return priors_; }

 private:
  double effective(const QFunction& learned, const QFunction& prior, int s, int a) const;

  int num_states_;
  int num_actions_;
  PosteriorConfig cfg_;
  std::vector<QFunction> learned_;
  std::vector<QFunction> priors_;
};

/// Diagnostic dump: per-state across-member mean and std of effective values,
/// as JSON.
std::string posterior_snapshot_json(const EnsemblePosterior& p);

}  // namespace barvf::posterior

#endif  // BARVF_POSTERIOR_HPP
