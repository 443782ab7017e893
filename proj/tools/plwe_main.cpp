// plwe: scan, attack, analyze and replay PLWE instances from a JSON config.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "plwe/errors.hpp"
#include "plwe/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRefused = 3;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<unsigned> threads;
  std::optional<std::string> output;
  std::optional<std::string> format;
  bool honest_sampling = false;
  std::optional<std::string> record_dir;
};

plwe::ExperimentConfig load(const Overrides& o) {
  auto cfg = plwe::load_config(o.config_path);
  if (o.seed) cfg.seed = *o.seed;
  if (o.trials) {
    if (*o.trials == 0) throw plwe::ConfigError("--trials must be at least 1");
    cfg.attack.trials = *o.trials;
  }
  if (o.threads) cfg.threads = *o.threads;
  if (o.output) cfg.output.path = *o.output;
  if (o.format) cfg.output.format = *o.format;
  if (o.honest_sampling) cfg.attack.honest_sampling = true;
  if (o.record_dir) cfg.record_dir = *o.record_dir;
  return cfg;
}

void emit(const plwe::ExperimentConfig& cfg, const std::string& text) {
  if (cfg.output.path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(cfg.output.path);
  if (!out) throw plwe::ConfigError("cannot write output file '" + cfg.output.path + "'");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "experiment config (JSON)")->required();
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--threads", o.threads, "worker threads");
  cmd->add_option("--output", o.output, "write the report here instead of stdout");
  cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PLWE evaluation-attack toolkit"};
  app.require_subcommand(1);
  Overrides o;
  std::optional<double> min_M;
  std::string sample_path;

  auto* scan = app.add_subcommand("scan", "report roots, binomial factors and applicable attacks");
  add_common(scan, o);

  auto* attack = app.add_subcommand("attack", "run a seeded attack campaign");
  add_common(attack, o);
  attack->add_option("--trials", o.trials, "number of trials");
  attack->add_flag("--honest-sampling", o.honest_sampling, "rejection-sample a(x) in R_{q,0} for trace attacks");
  attack->add_option("--record-dir", o.record_dir, "write each trial's samples as trial_<i>.jsonl");

  auto* analyze = app.add_subcommand("analyze", "distinguishing probabilities and sample-count tables");
  add_common(analyze, o);
  analyze->add_option("--min-M", min_M, "posterior target for the minimal-M column (default 0.99)");

  auto* replay = app.add_subcommand("replay", "re-run one attack on a recorded sample file");
  add_common(replay, o);
  replay->add_option("--samples", sample_path, "line-JSON sample file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    const auto cfg = load(o);
    if (scan->parsed()) {
      emit(cfg, plwe::cmd_scan(cfg));
    } else if (attack->parsed()) {
      const auto report = plwe::run_campaign(cfg);
      emit(cfg, cfg.output.format == "csv" ? plwe::campaign_to_csv(report) : plwe::campaign_to_json(report));
      const auto& s = report.summary;
      std::cerr << "trials=" << s.trials << " correct_on_plwe=" << s.correct_on_plwe << '/' << s.plwe_trials
                << " correct_on_uniform=" << s.correct_on_uniform << '/' << s.uniform_trials
                << " failed=" << s.failed_trials << " digest=" << plwe::campaign_digest(report) << '\n';
    } else if (analyze->parsed()) {
      emit(cfg, cfg.output.format == "csv" ? plwe::f_of_r_csv() : plwe::cmd_analyze(cfg, min_M));
    } else if (replay->parsed()) {
      emit(cfg, plwe::cmd_replay(cfg, sample_path));
    }
  } catch (const plwe::PreconditionRefused& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitRefused;
  } catch (const plwe::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const plwe::InvalidModulus& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const plwe::InvalidPolynomial& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const plwe::ReducibleBinomial& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
