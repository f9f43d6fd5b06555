#include "barvf/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "barvf/errors.hpp"
#include "barvf/rng.hpp"

namespace barvf::harness {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
  if (episodes < 1) throw InvalidInputError("ExperimentConfig: episodes must be >= 1");
  if (seeds.empty()) throw InvalidInputError("ExperimentConfig: seeds must be non-empty");
  if (smoothing_window < 1) throw InvalidInputError("ExperimentConfig: smoothing_window must be >= 1");
  agent.validate();
  envs::make_env(env_name);  // throws on unknown names
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j{
      {"env", cfg.env_name},
      {"agent", std::string(agents::agent_name(cfg.agent.kind))},
      {"beta", cfg.agent.beta},
      {"z_samples", cfg.agent.z_samples},
      {"episode_batched_updates", cfg.agent.episode_batched_updates},
      {"epsilon",
       {{"max_eps", cfg.agent.epsilon.max_eps},
        {"min_eps", cfg.agent.epsilon.min_eps},
        {"warmup_steps", cfg.agent.epsilon.warmup_steps},
        {"decay_rate", cfg.agent.epsilon.decay_rate}}},
      {"episodes", cfg.episodes},
      {"seeds", cfg.seeds},
      {"posterior",
       {{"member_count", cfg.posterior.member_count},
        {"prior_scale", cfg.posterior.prior_scale},
        {"noise_scale", cfg.posterior.noise_scale},
        {"step_size", cfg.posterior.step_size},
        {"gamma", cfg.posterior.gamma}}},
      {"output_dir", cfg.output_dir},
      {"smoothing_window", cfg.smoothing_window},
  };
  if (cfg.gamma_override) j["gamma_override"] = *cfg.gamma_override;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  if (j.contains("env")) cfg.env_name = j.at("env").get<std::string>();
  if (j.contains("agent")) cfg.agent.kind = agents::agent_kind_from_name(j.at("agent").get<std::string>());
  if (j.contains("beta")) cfg.agent.beta = j.at("beta").get<double>();
  if (j.contains("z_samples")) cfg.agent.z_samples = j.at("z_samples").get<int>();
  if (j.contains("episode_batched_updates"))
    cfg.agent.episode_batched_updates = j.at("episode_batched_updates").get<bool>();
  if (j.contains("epsilon")) {
    const auto& e = j.at("epsilon");
    if (e.contains("max_eps")) cfg.agent.epsilon.max_eps = e.at("max_eps").get<double>();
    if (e.contains("min_eps")) cfg.agent.epsilon.min_eps = e.at("min_eps").get<double>();
    if (e.contains("warmup_steps")) cfg.agent.epsilon.warmup_steps = e.at("warmup_steps").get<std::int64_t>();
    if (e.contains("decay_rate")) cfg.agent.epsilon.decay_rate = e.at("decay_rate").get<double>();
  }
  if (j.contains("episodes")) cfg.episodes = j.at("episodes").get<int>();
  if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (j.contains("posterior")) {
    const auto& p = j.at("posterior");
    if (p.contains("member_count")) cfg.posterior.member_count = p.at("member_count").get<int>();
    if (p.contains("prior_scale")) cfg.posterior.prior_scale = p.at("prior_scale").get<double>();
    if (p.contains("noise_scale")) cfg.posterior.noise_scale = p.at("noise_scale").get<double>();
    if (p.contains("step_size")) cfg.posterior.step_size = p.at("step_size").get<double>();
    if (p.contains("gamma")) cfg.posterior.gamma = p.at("gamma").get<double>();
  }
  if (j.contains("gamma_override")) cfg.gamma_override = j.at("gamma_override").get<double>();
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("smoothing_window")) cfg.smoothing_window = j.at("smoothing_window").get<int>();
  return cfg;
}

envs::TabularMdp build_env(const ExperimentConfig& cfg) {
  envs::TabularMdp mdp = envs::make_env(cfg.env_name);
  if (cfg.gamma_override) mdp.gamma = *cfg.gamma_override;
  return mdp;
}

RunRecord run_single(const ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  envs::TabularMdp mdp = build_env(cfg);
  posterior::PosteriorConfig pcfg = cfg.posterior;
  if (cfg.gamma_override) pcfg.gamma = *cfg.gamma_override;

  agents::AgentSpec spec = cfg.agent;
  if (spec.kind == agents::AgentKind::kBaseline && spec.epsilon.decay_rate == 0.0) {
    spec.epsilon.decay_rate = agents::default_decay_rate(
        static_cast<std::int64_t>(cfg.episodes) * mdp.horizon, spec.epsilon.warmup_steps);
  }

  Rng init_rng(sub_seed(seed, stream::kPosteriorInit));
  Rng run_rng(sub_seed(seed, stream::kAgent));
  agents::RunState state(mdp.num_states, mdp.num_actions, pcfg, init_rng);

  RunRecord record;
  record.config = cfg;
  record.seed = seed;
  record.rows.reserve(cfg.episodes);
  for (int k = 0; k < cfg.episodes; ++k) {
    const agents::EpisodeResult ep = agents::run_episode(spec, mdp, state, k, run_rng);
    record.rows.push_back({k, ep.undiscounted_return, ep.steps, ep.mean_rate, ep.mean_distortion});
  }
  record.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<RunRecord> records;
  records.reserve(cfg.seeds.size());
  for (std::uint64_t seed : cfg.seeds) {
    records.push_back(run_single(cfg, seed));
    if (!cfg.output_dir.empty()) write_run_record(records.back(), cfg.output_dir);
  }
  return records;
}

namespace {

double mean_of(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

double std_of(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

int final_window_start(int episodes) { return episodes - std::max(1, episodes / 10); }

double final_window_mean(const RunRecord& record, double (*field)(const EpisodeRow&)) {
  const int start = final_window_start(static_cast<int>(record.rows.size()));
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = start; i < record.rows.size(); ++i) {
    sum += field(record.rows[i]);
    ++count;
  }
  return count > 0 ? sum / count : 0.0;
}

}  // namespace

double final_window_mean_return(const RunRecord& record) {
  return final_window_mean(record, [](const EpisodeRow& r) { return r.ret; });
}
double final_window_mean_rate(const RunRecord& record) {
  return final_window_mean(record, [](const EpisodeRow& r) { return r.mean_rate; });
}
double final_window_mean_distortion(const RunRecord& record) {
  return final_window_mean(record, [](const EpisodeRow& r) { return r.mean_distortion; });
}

SweepSummary beta_sweep(const ExperimentConfig& base, const std::vector<double>& betas) {
  if (base.agent.kind != agents::AgentKind::kBaRvf)
    throw InvalidInputError("beta_sweep: agent must be ba-rvf");
  if (betas.empty()) throw InvalidInputError("beta_sweep: empty beta list");

  SweepSummary sweep;
  for (double beta : betas) {
    ExperimentConfig cfg = base;
    cfg.agent.beta = beta;
    std::vector<RunRecord> records = run_experiment(cfg);

    BetaSummary summary;
    summary.beta = beta;
    std::vector<double> returns, rates, distortions;
    for (const RunRecord& r : records) {
      returns.push_back(final_window_mean_return(r));
      rates.push_back(final_window_mean_rate(r));
      distortions.push_back(final_window_mean_distortion(r));
    }
    summary.mean_return = mean_of(returns);
    summary.std_return = std_of(returns, summary.mean_return);
    summary.stderr_return = summary.std_return / std::sqrt(static_cast<double>(returns.size()));
    summary.mean_rate = mean_of(rates);
    summary.mean_distortion = mean_of(distortions);

    std::vector<double> curve(cfg.episodes, 0.0);
    for (const RunRecord& r : records)
      for (const EpisodeRow& row : r.rows) curve[row.episode] += row.ret;
    for (double& v : curve) v /= static_cast<double>(records.size());
    summary.smoothed_curve = moving_average(curve, cfg.smoothing_window);

    sweep.per_beta.push_back(std::move(summary));
    for (RunRecord& r : records) sweep.records.push_back(std::move(r));
  }
  return sweep;
}

std::vector<double> moving_average(const std::vector<double>& values, int window) {
  if (window < 1) throw InvalidInputError("moving_average: window must be >= 1");
  const int n = static_cast<int>(values.size());
  const int lo = (window - 1) / 2;
  const int hi = window / 2;
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const int a = std::max(0, i - lo);
    const int b = std::min(n - 1, i + hi);
    double sum = 0.0;
    for (int k = a; k <= b; ++k) sum += values[k];
    out[i] = sum / static_cast<double>(b - a + 1);
  }
  return out;
}

namespace {

std::string format_beta(double beta) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", beta);
  std::string s(buf);
  // Keep filenames plain: 1e+06 -> 1e6.
  const auto e = s.find('e');
  if (e == std::string::npos) return s;
  std::string exp = s.substr(e + 1);
  std::string sign;
  if (!exp.empty() && (exp[0] == '+' || exp[0] == '-')) {
    if (exp[0] == '-') sign = "-";
    exp.erase(0, 1);
  }
  while (exp.size() > 1 && exp[0] == '0') exp.erase(0, 1);
  return s.substr(0, e + 1) + sign + exp;
}

}  // namespace

std::string run_csv_filename(const ExperimentConfig& cfg, double beta, std::uint64_t seed) {
  std::ostringstream name;
  name << "run_" << cfg.env_name << "_" << agents::agent_name(cfg.agent.kind) << "_"
       << format_beta(beta) << "_" << seed << ".csv";
  return name.str();
}

std::string run_record_csv(const RunRecord& record) {
  std::string out = "episode,return,steps,mean_rate_nats,mean_distortion\n";
  char buf[200];
  for (const EpisodeRow& row : record.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%d,%.17g,%.17g\n", row.episode, row.ret, row.steps,
                  row.mean_rate, row.mean_distortion);
    out += buf;
  }
  return out;
}

std::vector<EpisodeRow> parse_run_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open run CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty run CSV: " + path);
  std::vector<EpisodeRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    EpisodeRow row;
    if (std::sscanf(line.c_str(), "%d,%lg,%d,%lg,%lg", &row.episode, &row.ret, &row.steps,
                    &row.mean_rate, &row.mean_distortion) != 5)
      throw IoError("malformed row in " + path + ": " + line);
    rows.push_back(row);
  }
  return rows;
}

void write_run_record(const RunRecord& record, const std::string& output_dir) {
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  const fs::path path =
      fs::path(output_dir) / run_csv_filename(record.config, record.config.agent.beta, record.seed);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << run_record_csv(record);
  if (!out) throw IoError("write failed for " + path.string());
}

void write_outputs(const std::vector<RunRecord>& records, const nlohmann::json& summary,
                   const std::string& output_dir) {
  if (records.empty()) throw InvalidInputError("write_outputs: no records");
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  for (const RunRecord& record : records) write_run_record(record, output_dir);
  const fs::path path = fs::path(output_dir) / "summary.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << summary.dump(2) << "\n";
  if (!out) throw IoError("write failed for " + path.string());
}

nlohmann::json sweep_summary_json(const ExperimentConfig& base, const SweepSummary& sweep) {
  nlohmann::json per_beta = nlohmann::json::array();
  for (const BetaSummary& b : sweep.per_beta) {
    per_beta.push_back({{"beta", b.beta},
                        {"final_window_mean_return", b.mean_return},
                        {"final_window_std_return", b.std_return},
                        {"final_window_stderr_return", b.stderr_return},
                        {"final_window_mean_rate_nats", b.mean_rate},
                        {"final_window_mean_distortion", b.mean_distortion},
                        {"smoothed_curve", b.smoothed_curve}});
  }
  return nlohmann::json{{"config", config_to_json(base)}, {"per_beta", per_beta}};
}

}  // namespace barvf::harness
