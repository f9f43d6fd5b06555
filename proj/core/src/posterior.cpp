#include "barvf/posterior.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "barvf/errors.hpp"

namespace barvf::posterior {

EnsemblePosterior::EnsemblePosterior(int num_states, int num_actions, const PosteriorConfig& cfg,
                                     Rng& rng)
    : num_states_(num_states), num_actions_(num_actions), cfg_(cfg) {
  if (num_states < 1 || num_actions < 1)
    throw InvalidInputError("EnsemblePosterior: empty state or action space");
  if (cfg.member_count < 2) throw InvalidInputError("EnsemblePosterior: member_count must be >= 2");
  if (!(cfg.prior_scale >= 0.0 && cfg.noise_scale >= 0.0))
    throw InvalidInputError("EnsemblePosterior: scales must be >= 0");
  if (!(cfg.step_size > 0.0 && cfg.step_size <= 1.0))
    throw InvalidInputError("EnsemblePosterior: step_size must be in (0,1]");
  if (!(cfg.gamma >= 0.0 && cfg.gamma < 1.0))
    throw InvalidInputError("EnsemblePosterior: gamma must be in [0,1)");

  learned_.assign(cfg.member_count, QFunction(num_states, num_actions));
  priors_.reserve(cfg.member_count);
  std::normal_distribution<double> standard_normal(0.0, 1.0);
  for (int m = 0; m < cfg.member_count; ++m) {
    QFunction prior(num_states, num_actions);
    for (double& v : prior.values) v = standard_normal(rng);
    priors_.push_back(std::move(prior));
  }
}

double EnsemblePosterior::effective(const QFunction& learned, const QFunction& prior, int s,
                                    int a) const {
  return learned.at(s, a) + cfg_.prior_scale * prior.at(s, a);
}

std::pair<int, QFunction> EnsemblePosterior::sample(Rng& rng) const {
  std::uniform_int_distribution<int> pick(0, member_count() - 1);
  const int m = pick(rng);
  QFunction q(num_states_, num_actions_);
  const QFunction& learned = learned_[m];
  const QFunction& prior = priors_[m];
  for (std::size_t i = 0; i < q.values.size(); ++i)
    q.values[i] = learned.values[i] + cfg_.prior_scale * prior.values[i];
  return {m, std::move(q)};
}

double EnsemblePosterior::member_q(int m, int s, int a) const {
  if (m < 0 || m >= member_count() || s < 0 || s >= num_states_ || a < 0 || a >= num_actions_)
    throw std::out_of_range("EnsemblePosterior::member_q: index out of range");
  return effective(learned_[m], priors_[m], s, a);
}

void EnsemblePosterior::update(const Transition& t, Rng& rng) {
  if (t.state < 0 || t.state >= num_states_ || t.action < 0 || t.action >= num_actions_ ||
      t.next_state < 0 || t.next_state >= num_states_)
    throw InvalidInputError("EnsemblePosterior::update: transition indices out of range");
  if (!std::isfinite(t.reward)) throw NumericError("EnsemblePosterior::update: non-finite reward");

  std::normal_distribution<double> noise(0.0, 1.0);
  for (int m = 0; m < member_count(); ++m) {
    const double eps = cfg_.noise_scale * noise(rng);
    double target = t.reward + eps;
    if (!t.done) {
      double best = effective(learned_[m], priors_[m], t.next_state, 0);
      for (int a = 1; a < num_actions_; ++a)
        best = std::max(best, effective(learned_[m], priors_[m], t.next_state, a));
      target += cfg_.gamma * best;
    }
    const double td = target - effective(learned_[m], priors_[m], t.state, t.action);
    learned_[m].at(t.state, t.action) += cfg_.step_size * td;
  }
}

std::string posterior_snapshot_json(const EnsemblePosterior& p) {
  nlohmann::json states = nlohmann::json::array();
  for (int s = 0; s < p.num_states(); ++s) {
    nlohmann::json means = nlohmann::json::array();
    nlohmann::json stds = nlohmann::json::array();
    for (int a = 0; a < p.num_actions(); ++a) {
      double mean = 0.0;
      for (int m = 0; m < p.member_count(); ++m) mean += p.member_q(m, s, a);
      mean /= p.member_count();
      double var = 0.0;
      for (int m = 0; m < p.member_count(); ++m) {
        const double d = p.member_q(m, s, a) - mean;
        var += d * d;
      }
      var /= p.member_count();
      means.push_back(mean);
      stds.push_back(std::sqrt(var));
    }
    states.push_back({{"state", s}, {"mean", means}, {"std", stds}});
  }
  nlohmann::json j{{"member_count", p.member_count()},
                   {"prior_scale", p.config().prior_scale},
                   {"noise_scale", p.config().noise_scale},
                   {"states", states}};
  return j.dump(2);
}

}  // namespace barvf::posterior
