#ifndef BARVF_HARNESS_HPP
#define BARVF_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "barvf/agents.hpp"
#include "barvf/envs.hpp"
#include "barvf/posterior.hpp"

namespace barvf::harness {

struct ExperimentConfig {
  std::string env_name = "riverswim";
  agents::AgentSpec agent;
  int episodes = 1;
  std::vector<std::uint64_t> seeds = {0};
  posterior::PosteriorConfig posterior;
  std::optional<double> gamma_override;
  std::string output_dir;  // empty = do not write
  int smoothing_window = 10;

  void validate() const;
};

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

struct EpisodeRow {
  int episode = 0;
  double ret = 0.0;
  int steps = 0;
  double mean_rate = 0.0;
  double mean_distortion = 0.0;
};

struct RunRecord {
  ExperimentConfig config;
  std::uint64_t seed = 0;
  std::vector<EpisodeRow> rows;
  double duration_seconds = 0.0;
};

/// Environment named by the config, with the gamma override applied.
envs::TabularMdp build_env(const ExperimentConfig& cfg);

/// One deterministic run: all randomness derives from `seed` via named
/// sub-streams (posterior initialization vs. interaction).
RunRecord run_single(const ExperimentConfig& cfg, std::uint64_t seed);

/// One run per configured seed; per-run CSVs are written to output_dir as
/// they complete when output_dir is non-empty.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg);

struct BetaSummary {
  double beta = 0.0;
  double mean_return = 0.0;      // final-window mean, averaged over seeds
  double std_return = 0.0;       // across seeds
  double stderr_return = 0.0;
  double mean_rate = 0.0;
  double mean_distortion = 0.0;
  std::vector<double> smoothed_curve;  // seed-averaged returns, moving average
};

struct SweepSummary {
  std::vector<BetaSummary> per_beta;
  std::vector<RunRecord> records;
};

/// Runs the base experiment once per beta (agent must be ba-rvf).
SweepSummary beta_sweep(const ExperimentConfig& base, const std::vector<double>& betas);

/// Mean of the last 10% of episodes (at least one).
double final_window_mean_return(const RunRecord& record);
double final_window_mean_rate(const RunRecord& record);
double final_window_mean_distortion(const RunRecord& record);

/// Centered moving average; window 1 is the identity.
std::vector<double> moving_average(const std::vector<double>& values, int window);

std::string run_csv_filename(const ExperimentConfig& cfg, double beta, std::uint64_t seed);
std::string run_record_csv(const RunRecord& record);
std::vector<EpisodeRow> parse_run_csv(const std::string& path);

void write_run_record(const RunRecord& record, const std::string& output_dir);
void write_outputs(const std::vector<RunRecord>& records, const nlohmann::json& summary,
                   const std::string& output_dir);

nlohmann::json sweep_summary_json(const ExperimentConfig& base, const SweepSummary& sweep);

}  // namespace barvf::harness

#endif  // BARVF_HARNESS_HPP
