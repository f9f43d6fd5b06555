#ifndef BARVF_RATE_DISTORTION_HPP
#define BARVF_RATE_DISTORTION_HPP

#include <string>
#include <vector>

#include "barvf/qfunction.hpp"

namespace barvf::rd {

/// Per-state distortion table: entry (z, a) is the squared gap between sample
/// z's best action value and its value of action a. Every row has a zero at
/// the sample's own greedy action.
struct DistortionMatrix {
  int num_samples = 0;  // Z
  int num_actions = 0;  // A
  std::vector<double> values;  // row-major Z x A, all >= 0

  DistortionMatrix() = default;
  DistortionMatrix(int z, int a)
      : num_samples(z), num_actions(a), values(static_cast<std::size_t>(z) * a, 0.0) {}

  double& at(int z, int a) { return values[static_cast<std::size_t>(z) * num_actions + a]; }
  double at(int z, int a) const { return values[static_cast<std::size_t>(z) * num_actions + a]; }
};

/// Marginal over the Z source samples; the plug-in empirical measure is the
/// uniform case.
struct SourceDistribution {
  std::vector<double> weights;

  static SourceDistribution uniform(int z);
  void validate() const;
};

struct BAConfig {
  double beta = 0.0;        // Lagrange multiplier, nats per squared-return unit
  int max_iterations = 200;
  double tolerance = 1e-9;  // stop when the objective changes by less than this

  void validate() const;
};

/// Converged channel P(target action | source sample) with its rate (mutual
/// information in nats) and expected distortion. `objective_trace` records the
/// Lagrangian objective rate + beta * distortion after each iteration.
struct ChannelSolution {
  int num_samples = 0;
  int num_actions = 0;
  std::vector<double> conditional;  // row-major Z x A, each row a distribution
  std::vector<double> marginal;     // length A
  double rate = 0.0;
  double expected_distortion = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;

  double cond(int z, int a) const { return conditional[static_cast<std::size_t>(z) * num_actions + a]; }
};

/// Squared value-gap distortions of every sample at one state.
DistortionMatrix build_distortion_matrix(const std::vector<QFunction>& samples, int state);

/// Alternating fixed-point iteration for the rate-distortion-optimal channel
/// at multiplier beta. conditional row z is proportional to
/// marginal(a) * exp(-beta * d[z,a]); the marginal is the source-weighted
/// average of the rows.
ChannelSolution blahut_arimoto(const DistortionMatrix& d, const SourceDistribution& source,
                               const BAConfig& cfg);

/// Mutual information I(source; action) in nats of the joint induced by
/// `conditional` (row-major Z x A) and `source`. 0 ln 0 is treated as 0.
double rate_of(const std::vector<double>& conditional, int num_actions,
               const SourceDistribution& source);

/// Source- and channel-averaged distortion.
double expected_distortion(const std::vector<double>& conditional, int num_actions,
                           const SourceDistribution& source, const DistortionMatrix& d);

struct RdPoint {
  double beta = 0.0;
  double rate = 0.0;
  double distortion = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// One converged solution summary per beta; betas must be strictly ascending
/// and non-negative.
std::vector<RdPoint> trace_rd_curve(const DistortionMatrix& d, const SourceDistribution& source,
                                    const std::vector<double>& betas, const BAConfig& cfg);

/// Debug dump: CSV with one row per beta
/// (beta,rate_nats,expected_distortion,iterations,converged).
std::string rd_curve_csv(const std::vector<RdPoint>& points);

}  // namespace barvf::rd

#endif  // BARVF_RATE_DISTORTION_HPP
