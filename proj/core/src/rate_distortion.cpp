#include "barvf/rate_distortion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "barvf/errors.hpp"

namespace barvf::rd {

namespace {

constexpr double kSupportFloor = 1e-300;  // marginal entries below this leave the support for good

}  // namespace

SourceDistribution SourceDistribution::uniform(int z) {
  if (z < 1) throw InvalidInputError("SourceDistribution::uniform: need z >= 1");
  SourceDistribution s;
  s.weights.assign(z, 1.0 / z);
  return s;
}

void SourceDistribution::validate() const {
  if (weights.empty()) throw InvalidInputError("SourceDistribution: empty weights");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidInputError("SourceDistribution: negative or NaN weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw InvalidInputError("SourceDistribution: weights must sum to 1");
}

void BAConfig::validate() const {
  if (!(beta >= 0.0)) throw InvalidInputError("BAConfig: beta must be >= 0");
  if (max_iterations < 1) throw InvalidInputError("BAConfig: max_iterations must be >= 1");
  if (!(tolerance > 0.0)) throw InvalidInputError("BAConfig: tolerance must be > 0");
}

DistortionMatrix build_distortion_matrix(const std::vector<QFunction>& samples, int state) {
  if (samples.empty()) throw InvalidInputError("build_distortion_matrix: empty sample list");
  const int num_actions = samples.front().num_actions;
  for (const QFunction& q : samples) {
    if (q.num_actions != num_actions)
      throw ShapeError("build_distortion_matrix: samples disagree on action count");
    if (state < 0 || state >= q.num_states)
      throw InvalidInputError("build_distortion_matrix: state out of range");
  }
  DistortionMatrix d(static_cast<int>(samples.size()), num_actions);
  for (int z = 0; z < d.num_samples; ++z) {
    const QFunction& q = samples[z];
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < num_actions; ++a) best = std::max(best, q.at(state, a));
    for (int a = 0; a < num_actions; ++a) {
      const double gap = best - q.at(state, a);
      d.at(z, a) = gap * gap;
    }
  }
  return d;
}

ChannelSolution blahut_arimoto(const DistortionMatrix& d, const SourceDistribution& source,
                               const BAConfig& cfg) {
  cfg.validate();
  source.validate();
  const int Z = d.num_samples;
  const int A = d.num_actions;
  if (Z < 1 || A < 1) throw InvalidInputError("blahut_arimoto: empty distortion matrix");
  if (static_cast<int>(source.weights.size()) != Z)
    throw ShapeError("blahut_arimoto: source size does not match distortion rows");
  for (double v : d.values) {
    if (!std::isfinite(v)) throw NumericError("blahut_arimoto: non-finite distortion entry");
    if (v < 0.0) throw InvalidInputError("blahut_arimoto: negative distortion entry");
  }

  // Per-row exponential tilt exp(-beta * (d - row_min)); shifting by the row
  // minimum keeps the largest factor at exactly 1 for any beta.
  std::vector<double> tilt(static_cast<std::size_t>(Z) * A);
  std::vector<double> row_min(Z);
  for (int z = 0; z < Z; ++z) {
    double m = std::numeric_limits<double>::infinity();
    for (int a = 0; a < A; ++a) m = std::min(m, d.at(z, a));
    row_min[z] = m;
    for (int a = 0; a < A; ++a)
      tilt[static_cast<std::size_t>(z) * A + a] = std::exp(-cfg.beta * (d.at(z, a) - m));
  }

  ChannelSolution sol;
  sol.num_samples = Z;
  sol.num_actions = A;
  sol.conditional.assign(static_cast<std::size_t>(Z) * A, 0.0);
  std::vector<double> q(A, 1.0 / A);  // output marginal, uniform start

  double prev_objective = std::numeric_limits<double>::infinity();
  double objective = prev_objective;
  sol.converged = false;

  for (int it = 0; it < cfg.max_iterations; ++it) {
    // Channel update given q, plus the Lagrangian objective
    //   sum_z w_z [ KL(p_z || q) + beta * E_{p_z}[d_z] ]
    // evaluated in closed form via the row normalizers.
    double dist = 0.0;
    double rate_vs_q = 0.0;
    for (int z = 0; z < Z; ++z) {
      const double* tz = &tilt[static_cast<std::size_t>(z) * A];
      double* pz = &sol.conditional[static_cast<std::size_t>(z) * A];
      double norm = 0.0;
      for (int a = 0; a < A; ++a) {
        pz[a] = q[a] * tz[a];
        norm += pz[a];
      }
      double shifted_dist = 0.0;  // E_{p_z}[d_z] - row_min
      const double inv = 1.0 / norm;
      for (int a = 0; a < A; ++a) {
        pz[a] *= inv;
        shifted_dist += pz[a] * (d.at(z, a) - row_min[z]);
      }
      const double w = source.weights[z];
      dist += w * (shifted_dist + row_min[z]);
      // KL(p_z||q) = -beta * (E d_z - row_min) - ln(norm)
      rate_vs_q += w * (-cfg.beta * shifted_dist - std::log(norm));
    }
    objective = rate_vs_q + cfg.beta * dist;
    sol.objective_trace.push_back(objective);
    sol.iterations = it + 1;

    // Marginal update: source-weighted mixture of the rows, with permanent
    // removal of vanished actions.
    std::vector<double> q_next(A, 0.0);
    for (int z = 0; z < Z; ++z) {
      const double w = source.weights[z];
      const double* pz = &sol.conditional[static_cast<std::size_t>(z) * A];
      for (int a = 0; a < A; ++a) q_next[a] += w * pz[a];
    }
    double qsum = 0.0;
    for (int a = 0; a < A; ++a) {
      if (q_next[a] < kSupportFloor) q_next[a] = 0.0;
      qsum += q_next[a];
    }
    for (int a = 0; a < A; ++a) q_next[a] /= qsum;
    q = std::move(q_next);

    if (prev_objective - objective < cfg.tolerance && it > 0) {
      sol.converged = true;
      break;
    }
    prev_objective = objective;
  }

  sol.marginal = q;
  sol.rate = rate_of(sol.conditional, A, source);
  sol.expected_distortion = expected_distortion(sol.conditional, A, source, d);
  return sol;
}

double rate_of(const std::vector<double>& conditional, int num_actions,
               const SourceDistribution& source) {
  source.validate();
  const int Z = static_cast<int>(source.weights.size());
  const int A = num_actions;
  if (A < 1 || conditional.size() != static_cast<std::size_t>(Z) * A)
    throw ShapeError("rate_of: conditional shape does not match source");
  std::vector<double> marginal(A, 0.0);
  for (int z = 0; z < Z; ++z) {
    double row_sum = 0.0;
    for (int a = 0; a < A; ++a) {
      const double p = conditional[static_cast<std::size_t>(z) * A + a];
      if (!(p >= 0.0)) throw InvalidInputError("rate_of: negative or NaN conditional entry");
      row_sum += p;
    }
    if (std::abs(row_sum - 1.0) > 1e-6)
      throw InvalidInputError("rate_of: conditional row not normalized");
    for (int a = 0; a < A; ++a)
      marginal[a] += source.weights[z] * conditional[static_cast<std::size_t>(z) * A + a];
  }
  double rate = 0.0;
  for (int z = 0; z < Z; ++z) {
    const double w = source.weights[z];
    if (w == 0.0) continue;
    for (int a = 0; a < A; ++a) {
      const double p = conditional[static_cast<std::size_t>(z) * A + a];
      // Subnormal entries can underflow out of the mixture marginal entirely;
      // their contribution is negligible, so skip them instead of producing
      // 0 * log(inf) = NaN.
      if (p > 1e-300 && marginal[a] > 0.0) rate += w * p * std::log(p / marginal[a]);
    }
  }
  return std::max(rate, 0.0);
}

double expected_distortion(const std::vector<double>& conditional, int num_actions,
                           const SourceDistribution& source, const DistortionMatrix& d) {
  const int Z = static_cast<int>(source.weights.size());
  const int A = num_actions;
  if (d.num_samples != Z || d.num_actions != A ||
      conditional.size() != static_cast<std::size_t>(Z) * A)
    throw ShapeError("expected_distortion: shape mismatch");
  double total = 0.0;
  for (int z = 0; z < Z; ++z)
    for (int a = 0; a < A; ++a)
      total += source.weights[z] * conditional[static_cast<std::size_t>(z) * A + a] * d.at(z, a);
  return total;
}

std::vector<RdPoint> trace_rd_curve(const DistortionMatrix& d, const SourceDistribution& source,
                                    const std::vector<double>& betas, const BAConfig& cfg) {
  if (betas.empty()) throw InvalidInputError("trace_rd_curve: empty beta list");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i] >= 0.0)) throw InvalidInputError("trace_rd_curve: betas must be >= 0");
    if (i > 0 && !(betas[i] > betas[i - 1]))
      throw InvalidInputError("trace_rd_curve: betas must be strictly ascending");
  }
  std::vector<RdPoint> points;
  points.reserve(betas.size());
  for (double beta : betas) {
    BAConfig c = cfg;
    c.beta = beta;
    ChannelSolution sol = blahut_arimoto(d, source, c);
    points.push_back({beta, sol.rate, sol.expected_distortion, sol.iterations, sol.converged});
  }
  return points;
}

std::string rd_curve_csv(const std::vector<RdPoint>& points) {
  std::string out = "beta,rate_nats,expected_distortion,iterations,converged\n";
  char buf[160];
  for (const RdPoint& p : points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%d,%d\n", p.beta, p.rate, p.distortion,
                  p.iterations, p.converged ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace barvf::rd
