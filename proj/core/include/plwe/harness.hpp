#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plwe/analysis.hpp"
#include "plwe/attacks.hpp"
#include "plwe/samplers.hpp"

namespace plwe {

struct InstanceConfig {
  std::uint64_t N = 0;
  std::vector<std::int64_t> f;
  std::uint64_t q = 0;
  double sigma = 0.0;
  bool truncated = false;
};

struct AttackConfig {
  std::string family;
  std::uint64_t M = 0;
  std::uint64_t M0 = 0;
  std::uint64_t ell = 0;
  unsigned n = 1;
  std::optional<std::int64_t> a;
  std::optional<std::int64_t> alpha;
  std::uint64_t trials = 1;
  // Unbounded families: fixed delta; otherwise estimated by Monte Carlo.
  std::optional<double> delta;
  std::uint64_t mc_draws = 100'000;
  bool honest_sampling = false;
  double table_cap = SigmaTable::kDefaultCap;
  std::uint64_t rq0_cap = 100'000'000;
};

struct OutputConfig {
  std::string path;
  std::string format = "json";
};

// Published values to compare against in analyze.
struct ReferenceConfig {
  std::optional<double> p_event;
  std::optional<double> big_delta;
};

struct ExperimentConfig {
  InstanceConfig instance;
  AttackConfig attack;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  unsigned n_max = 4;
  OutputConfig output;
  ReferenceConfig reference;
  // When set, each campaign trial writes its samples to trial_<index>.jsonl.
  std::string record_dir;
};

// Throws ConfigError naming the offending field.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& cfg, int indent = 2);

enum class AttackKind { SmallSet, SmallValues, Unbounded };

struct FamilySpec {
  AttackKind kind;
  bool trace;
  bool extended;
};

// small_set, small_values, unbounded_small_values, each optionally with a
// _trace suffix; the first two also with an extended_ prefix.
FamilySpec parse_family(const std::string& name);

// Everything a trial needs, validated once per campaign.
struct AttackSetup {
  FamilySpec family;
  RqContext ctx;
  GaussianSpec gauss;
  std::optional<FieldElement> alpha{};
  std::optional<ExtFieldCtx> ext{};
  std::shared_ptr<const SigmaTable> table{};
  std::uint64_t order = 0;
  double sigma_bar = 0.0;
  // Unbounded families only.
  double delta = 0.0;
  std::string delta_source{};
  std::uint64_t samples_per_trial = 0;
  std::uint64_t M0 = 0;
  std::uint64_t r_eff = 1;
  // Inequalities that gate the run, and ones reported for information.
  std::vector<Predicate> gates{};
  std::vector<Predicate> notes{};
};

// Throws ConfigError for inconsistent input and PreconditionRefused when a
// gate fails.
AttackSetup prepare_attack(const ExperimentConfig& cfg);

struct AttackOutcome {
  std::optional<AttackVerdict> verdict;
  std::optional<Decision> decision;

  // Non-NotPlwe verdict, or a Plwe decision.
  bool says_plwe() const;
};

AttackOutcome run_attack(const AttackSetup& setup, std::span<const Sample> samples, unsigned threads = 1);

struct TrialRecord {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  bool truth_plwe = false;
  std::string outcome;
  std::optional<std::uint64_t> guess;
  std::uint64_t survivor_count = 0;
  // Whether s(alpha) (or Tr(s(alpha))) is among the survivors.
  std::optional<bool> true_value_survived;
  std::optional<std::int64_t> votes;
  std::optional<std::int64_t> threshold;
  bool correct = false;
  std::uint64_t oracle_calls = 0;
  std::uint64_t samples = 0;
  std::optional<std::string> error;
  double wall_time_ms = 0.0;
};

struct CampaignSummary {
  std::uint64_t trials = 0;
  std::uint64_t plwe_trials = 0;
  std::uint64_t uniform_trials = 0;
  std::uint64_t correct_on_plwe = 0;
  std::uint64_t correct_on_uniform = 0;
  std::uint64_t said_plwe = 0;
  std::uint64_t said_plwe_and_plwe = 0;
  std::uint64_t true_value_survived = 0;
  std::uint64_t failed_trials = 0;
  std::uint64_t oracle_calls = 0;
  std::uint64_t samples = 0;

  double rate_plwe() const;
  double rate_uniform() const;
  double accuracy() const;
  // Empirical P(PLWE | verdict != NOT PLWE).
  double plwe_given_plwe_verdict() const;
  // Mean oracle calls per accepted sample.
  double calls_per_sample() const;
};

struct CampaignReport {
  ExperimentConfig config;
  AttackSetup setup;
  std::vector<TrialRecord> trials;
  CampaignSummary summary;
  double wall_time_ms = 0.0;
};

TrialRecord run_trial(const AttackSetup& setup, const ExperimentConfig& cfg, std::uint64_t index);
CampaignReport run_campaign(const ExperimentConfig& cfg);
CampaignSummary summarize(std::span<const TrialRecord> trials);

// Report JSON. Timing fields are omitted when include_timing is false; the
// digest is always taken over the timing-free form.
std::string campaign_to_json(const CampaignReport& r, bool include_timing = true, int indent = 2);
std::string campaign_to_csv(const CampaignReport& r);
std::string campaign_digest(const CampaignReport& r);

std::string cmd_scan(const ExperimentConfig& cfg);
std::string cmd_analyze(const ExperimentConfig& cfg, std::optional<double> min_M_target = std::nullopt);
// (r, f(r)) grid over (0, 4 sqrt 2].
std::string f_of_r_csv(std::uint64_t points = 200);
std::string cmd_replay(const ExperimentConfig& cfg, const std::string& sample_path);

}  // namespace plwe
