// Experiment CLI: run single experiments, beta sweeps, and rate-distortion
// curve traces over the tabular environments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "barvf/envs.hpp"
#include "barvf/errors.hpp"
#include "barvf/harness.hpp"
#include "barvf/rate_distortion.hpp"

namespace {

using barvf::harness::ExperimentConfig;

struct CliOptions {
  std::string env;
  std::string agent;
  double beta = -1.0;
  int z_samples = -1;
  int episodes = -1;
  std::string seeds;
  std::string out;
  std::string config_file;
  int smoothing_window = -1;
  double gamma = -1.0;
  int member_count = -1;
  double prior_scale = -1.0;
  double noise_scale = -1.0;
  double step_size = -1.0;
};

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) seeds.push_back(std::stoull(item));
  }
  return seeds;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) values.push_back(std::stod(item));
  }
  return values;
}

// Config file first, CLI flags on top.
ExperimentConfig assemble_config(const CliOptions& opt) {
  ExperimentConfig cfg;
  if (!opt.config_file.empty()) {
    std::ifstream in(opt.config_file);
    if (!in) throw barvf::IoError("cannot open config file: " + opt.config_file);
    nlohmann::json j;
    in >> j;
    cfg = barvf::harness::config_from_json(j);
  }
  if (!opt.env.empty()) cfg.env_name = opt.env;
  if (!opt.agent.empty()) cfg.agent.kind = barvf::agents::agent_kind_from_name(opt.agent);
  if (opt.beta >= 0.0) cfg.agent.beta = opt.beta;
  if (opt.z_samples > 0) cfg.agent.z_samples = opt.z_samples;
  if (opt.episodes > 0) cfg.episodes = opt.episodes;
  if (!opt.seeds.empty()) cfg.seeds = parse_seed_list(opt.seeds);
  if (!opt.out.empty()) cfg.output_dir = opt.out;
  if (opt.smoothing_window > 0) cfg.smoothing_window = opt.smoothing_window;
  if (opt.gamma >= 0.0) cfg.gamma_override = opt.gamma;
  if (opt.member_count > 0) cfg.posterior.member_count = opt.member_count;
  if (opt.prior_scale >= 0.0) cfg.posterior.prior_scale = opt.prior_scale;
  if (opt.noise_scale >= 0.0) cfg.posterior.noise_scale = opt.noise_scale;
  if (opt.step_size > 0.0) cfg.posterior.step_size = opt.step_size;
  if (cfg.agent.kind == barvf::agents::AgentKind::kBaRvf && opt.beta < 0.0 &&
      opt.config_file.empty())
    throw barvf::InvalidInputError("ba-rvf requires --beta");
  return cfg;
}

void add_run_flags(CLI::App* app, CliOptions& opt) {
  app->add_option("--env", opt.env, "Environment: riverswim, confluence, empty-grid, corridor-grid");
  app->add_option("--agent", opt.agent, "Agent: baseline, rvf, ba-rvf");
  app->add_option("--beta", opt.beta, "Lagrange multiplier (ba-rvf)");
  app->add_option("--z-samples", opt.z_samples, "Posterior samples per compression step (ba-rvf)");
  app->add_option("--episodes", opt.episodes, "Episodes per run");
  app->add_option("--seeds", opt.seeds, "Comma-separated seed list, e.g. 0,1,2");
  app->add_option("--out", opt.out, "Output directory for per-run CSVs and summary.json");
  app->add_option("--config", opt.config_file, "JSON config file; flags override file values");
  app->add_option("--smoothing-window", opt.smoothing_window, "Centered moving-average window");
  app->add_option("--gamma", opt.gamma, "Discount override");
  app->add_option("--members", opt.member_count, "Ensemble member count");
  app->add_option("--prior-scale", opt.prior_scale, "Prior scale");
  app->add_option("--noise-scale", opt.noise_scale, "Target noise scale");
  app->add_option("--step-size", opt.step_size, "Tabular step size");
}

int cmd_run(const CliOptions& opt) {
  ExperimentConfig cfg = assemble_config(opt);
  const std::vector<barvf::harness::RunRecord> records = barvf::harness::run_experiment(cfg);
  for (const auto& record : records) {
    std::printf("seed %llu: final-window mean return %.4f (%zu episodes, %.2fs)\n",
                static_cast<unsigned long long>(record.seed),
                barvf::harness::final_window_mean_return(record), record.rows.size(),
                record.duration_seconds);
  }
  if (!cfg.output_dir.empty()) {
    nlohmann::json summary{{"config", barvf::harness::config_to_json(cfg)}};
    barvf::harness::write_outputs(records, summary, cfg.output_dir);
    std::printf("wrote %zu CSV file(s) and summary.json to %s\n", records.size(),
                cfg.output_dir.c_str());
  }
  return 0;
}

int cmd_sweep(const CliOptions& opt, const std::string& betas_text) {
  ExperimentConfig cfg = assemble_config(opt);
  cfg.agent.kind = barvf::agents::AgentKind::kBaRvf;
  const std::vector<double> betas = parse_double_list(betas_text);
  const barvf::harness::SweepSummary sweep = barvf::harness::beta_sweep(cfg, betas);
  std::printf("%-12s %-14s %-14s %-14s\n", "beta", "mean_return", "mean_rate", "mean_distortion");
  for (const auto& b : sweep.per_beta)
    std::printf("%-12g %-14.4f %-14.6f %-14.6f\n", b.beta, b.mean_return, b.mean_rate,
                b.mean_distortion);
  if (!cfg.output_dir.empty()) {
    barvf::harness::write_outputs(sweep.records, barvf::harness::sweep_summary_json(cfg, sweep),
                                  cfg.output_dir);
    std::printf("wrote %zu CSV file(s) and summary.json to %s\n", sweep.records.size(),
                cfg.output_dir.c_str());
  }
  return 0;
}

// Distortion matrix CSV: one row per source sample, comma-separated gaps.
barvf::rd::DistortionMatrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw barvf::IoError("cannot open matrix file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(parse_double_list(line));
    if (rows.back().size() != rows.front().size())
      throw barvf::ShapeError("matrix rows have unequal lengths in " + path);
  }
  if (rows.empty()) throw barvf::InvalidInputError("empty matrix file: " + path);
  barvf::rd::DistortionMatrix d(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int z = 0; z < d.num_samples; ++z)
    for (int a = 0; a < d.num_actions; ++a) d.at(z, a) = rows[z][a];
  return d;
}

int cmd_rd_trace(const std::string& matrix_path, const std::string& betas_text,
                 const std::string& out_dir) {
  const barvf::rd::DistortionMatrix d = load_matrix_csv(matrix_path);
  const auto source = barvf::rd::SourceDistribution::uniform(d.num_samples);
  std::vector<double> betas = parse_double_list(betas_text);
  const auto points = barvf::rd::trace_rd_curve(d, source, betas, barvf::rd::BAConfig{});
  const std::string csv = barvf::rd::rd_curve_csv(points);
  std::fputs(csv.c_str(), stdout);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const auto path = std::filesystem::path(out_dir) / "rd_curve.csv";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw barvf::IoError("cannot write " + path.string());
    out << csv;
    std::printf("wrote %s\n", path.string().c_str());
  }
  return 0;
}

int cmd_inspect(const std::string& env) {
  const barvf::envs::TabularMdp mdp = barvf::envs::make_env(env);
  std::printf("%s\n", barvf::envs::mdp_summary_json(mdp).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity-limited tabular RL experiments"};
  app.require_subcommand(1);

  CliOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "Run one experiment over a list of seeds");
  add_run_flags(run, run_opt);

  CliOptions sweep_opt;
  std::string betas_text;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a beta sweep with the ba-rvf agent");
  add_run_flags(sweep, sweep_opt);
  sweep->add_option("--betas", betas_text, "Comma-separated beta grid")->required();

  std::string matrix_path, trace_betas, trace_out;
  CLI::App* trace = app.add_subcommand("rd-trace", "Trace a rate-distortion curve from a matrix CSV");
  trace->add_option("--matrix", matrix_path, "Distortion matrix CSV (one row per sample)")->required();
  trace->add_option("--betas", trace_betas, "Comma-separated ascending betas")->required();
  trace->add_option("--out", trace_out, "Output directory for rd_curve.csv");

  std::string inspect_env;
  CLI::App* inspect = app.add_subcommand("inspect", "Print an environment summary as JSON");
  inspect->add_option("--env", inspect_env, "Environment name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opt);
    if (sweep->parsed()) return cmd_sweep(sweep_opt, betas_text);
    if (trace->parsed()) return cmd_rd_trace(matrix_path, trace_betas, trace_out);
    if (inspect->parsed()) return cmd_inspect(inspect_env);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
