#include "plwe/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json_io.hpp"
#include "plwe/serialization.hpp"

namespace plwe {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Stream index reserved for the Monte Carlo delta estimate.
constexpr std::uint64_t kDeltaStream = 0xde17a5eedULL;

const std::uint64_t kPosteriorTableM[] = {50, 100, 200, 350, 500, 1000};

template <typename T>
T require_number(const json& obj, const char* key, const std::string& path) {
  const std::string where = path + "." + key;
  if (!obj.contains(key)) throw ConfigError("missing field '" + where + "'");
  const auto& v = obj[key];
  if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw ConfigError("field '" + where + "' must be a number");
  } else if constexpr (std::is_unsigned_v<T>) {
    if (!v.is_number_unsigned()) throw ConfigError("field '" + where + "' must be a nonnegative integer");
  } else {
    if (!v.is_number_integer()) throw ConfigError("field '" + where + "' must be an integer");
  }
  return v.get<T>();
}

template <typename T>
T optional_number(const json& obj, const char* key, const std::string& path, T fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  return require_number<T>(obj, key, path);
}

bool optional_bool(const json& obj, const char* key, const std::string& path, bool fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  if (!obj[key].is_boolean()) throw ConfigError("field '" + path + "." + key + "' must be a boolean");
  return obj[key].get<bool>();
}

std::string optional_string(const json& obj, const char* key, const std::string& path, std::string fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  if (!obj[key].is_string()) throw ConfigError("field '" + path + "." + key + "' must be a string");
  return obj[key].get<std::string>();
}

const json& require_object(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key) || !obj[key].is_object()) {
    throw ConfigError("missing object '" + (path.empty() ? std::string(key) : path + "." + key) + "'");
  }
  return obj[key];
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

RqContext make_context(const InstanceConfig& inst) { return RqContext(inst.f, PrimeModulus(inst.q)); }

std::string family_name(const FamilySpec& f) {
  std::string base = f.kind == AttackKind::SmallSet      ? "small_set"
                     : f.kind == AttackKind::SmallValues ? "small_values"
                                                         : "unbounded_small_values";
  if (f.extended) base = "extended_" + base;
  if (f.trace) base += "_trace";
  return base;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t true_value(const AttackSetup& setup, const RingPoly& secret) {
  if (setup.family.trace) return eval_at_generator(secret, *setup.ext).trace().value();
  return eval(secret, *setup.alpha).value();
}

std::vector<Sample> draw_samples(const AttackSetup& setup, const ExperimentConfig& cfg, const PlweInstance& inst,
                                 bool truth_plwe, Rng& rng, std::uint64_t& calls) {
  std::vector<Sample> out;
  out.reserve(setup.samples_per_trial);
  const auto& ctx = setup.ctx;
  for (std::uint64_t i = 0; i < setup.samples_per_trial; ++i) {
    if (!setup.family.trace) {
      out.push_back(truth_plwe ? plwe_oracle(inst, rng) : uniform_oracle(ctx, rng));
      ++calls;
    } else if (!cfg.attack.honest_sampling) {
      out.push_back(truth_plwe ? plwe_oracle_rq0(inst, *setup.ext, rng).sample
                               : uniform_oracle_rq0(ctx, *setup.ext, rng));
      ++calls;
    } else {
      SampleSource source;
      if (truth_plwe) {
        source = [&inst](Rng& r) { return plwe_oracle(inst, r); };
      } else {
        source = [&ctx](Rng& r) { return uniform_oracle(ctx, r); };
      }
      Rq0Draw draw = sample_rq0(source, *setup.ext, rng, cfg.attack.rq0_cap);
      calls += draw.count;
      out.push_back(std::move(draw.sample));
    }
  }
  return out;
}

ordered_json predicates_json(const std::vector<Predicate>& ps) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : ps) arr.push_back(json_io::predicate(p));
  return arr;
}

ordered_json setup_json(const AttackSetup& s, const ExperimentConfig& cfg) {
  ordered_json j;
  j["family"] = family_name(s.family);
  if (s.alpha) j["alpha"] = s.alpha->value();
  if (s.ext) {
    j["n"] = s.ext->degree();
    j["a"] = s.ext->constant().value();
    j["sampling"] = cfg.attack.honest_sampling ? "rejection" : "direct";
  }
  j["order"] = s.order;
  j["sigma_bar"] = s.sigma_bar;
  j["p0"] = s.gauss.p0();
  j["samples_per_trial"] = s.samples_per_trial;
  const auto& q = s.ctx.modulus();
  if (s.table) {
    j["sigma_table"] = {{"size", s.table->size()},
                        {"analytic_bound", s.table->analytic_bound()},
                        {"analytic_size", s.table->analytic_size()},
                        {"r", s.table->r()},
                        {"block_len", s.table->block_len()},
                        {"coeff_bound", s.table->coeff_bound()},
                        {"tuple_count", s.table->tuple_count()}};
  }
  ordered_json predicted;
  if (s.family.kind == AttackKind::Unbounded) {
    j["delta"] = s.delta;
    j["delta_source"] = s.delta_source;
    predicted["threshold"] = usva_threshold(s.samples_per_trial, q, s.delta);
  } else if (s.family.extended) {
    const std::uint64_t chunks = s.samples_per_trial / s.M0;
    j["M0"] = s.M0;
    j["r_eff"] = s.r_eff;
    predicted["chunks"] = chunks;
    predicted["threshold"] = extended_threshold(chunks, s.gauss.p0(), s.M0, s.r_eff);
    predicted["plwe_chunk_pass_bound"] = std::pow(s.gauss.p0(), static_cast<double>(s.M0 * s.r_eff));
  } else {
    const Family fam = s.family.kind == AttackKind::SmallSet ? Family::SmallSet : Family::SmallValues;
    const double analytic = s.table ? s.table->analytic_size() : 0.0;
    const auto b = posterior_bounds(fam, s.samples_per_trial, q, analytic, s.gauss.p0(), s.r_eff);
    predicted["plwe_posterior_bound"] = b.plwe_posterior;
    predicted["success_bound"] = b.success;
    if (s.table) {
      const auto exact = posterior_bounds(fam, s.samples_per_trial, q, static_cast<double>(s.table->size()),
                                          s.gauss.p0(), s.r_eff);
      predicted["plwe_posterior_bound_exact_table"] = exact.plwe_posterior;
    }
  }
  j["predicted"] = std::move(predicted);
  j["gates"] = predicates_json(s.gates);
  j["notes"] = predicates_json(s.notes);
  return j;
}

ordered_json summary_json(const CampaignSummary& s) {
  return {{"trials", s.trials},
          {"plwe_trials", s.plwe_trials},
          {"uniform_trials", s.uniform_trials},
          {"correct_on_plwe", s.correct_on_plwe},
          {"correct_on_uniform", s.correct_on_uniform},
          {"rate_correct_on_plwe", s.rate_plwe()},
          {"rate_correct_on_uniform", s.rate_uniform()},
          {"accuracy", s.accuracy()},
          {"said_plwe", s.said_plwe},
          {"plwe_given_plwe_verdict", s.plwe_given_plwe_verdict()},
          {"true_value_survived", s.true_value_survived},
          {"failed_trials", s.failed_trials},
          {"oracle_calls", s.oracle_calls},
          {"samples", s.samples},
          {"calls_per_sample", s.calls_per_sample()}};
}

ordered_json trial_json(const TrialRecord& t, bool timing) {
  ordered_json j;
  j["index"] = t.index;
  j["seed"] = t.seed;
  j["truth"] = t.truth_plwe ? "plwe" : "uniform";
  j["outcome"] = t.outcome;
  if (t.guess) j["guess"] = *t.guess;
  j["survivors"] = t.survivor_count;
  if (t.true_value_survived) j["true_value_survived"] = *t.true_value_survived;
  if (t.votes) j["votes"] = *t.votes;
  if (t.threshold) j["threshold"] = *t.threshold;
  j["correct"] = t.correct;
  j["oracle_calls"] = t.oracle_calls;
  j["samples"] = t.samples;
  if (t.error) j["error"] = *t.error;
  if (timing) j["wall_time_ms"] = t.wall_time_ms;
  return j;
}

ordered_json campaign_json_body(const CampaignReport& r, bool timing) {
  ordered_json j;
  j["config"] = ordered_json::parse(config_to_json(r.config, -1));
  // Worker count changes scheduling only, so it stays out of the digest.
  if (!timing) j["config"].erase("threads");
  j["setup"] = setup_json(r.setup, r.config);
  j["summary"] = summary_json(r.summary);
  j["trials"] = ordered_json::array();
  for (const auto& t : r.trials) j["trials"].push_back(trial_json(t, timing));
  if (timing) j["wall_time_ms"] = r.wall_time_ms;
  return j;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  const json& inst = require_object(root, "instance", "");
  cfg.instance.N = require_number<std::uint64_t>(inst, "N", "instance");
  cfg.instance.q = require_number<std::uint64_t>(inst, "q", "instance");
  cfg.instance.sigma = require_number<double>(inst, "sigma", "instance");
  cfg.instance.truncated = optional_bool(inst, "truncated", "instance", false);
  if (!inst.contains("f") || !inst["f"].is_array()) throw ConfigError("missing array 'instance.f'");
  for (const auto& c : inst["f"]) {
    if (!c.is_number_integer()) throw ConfigError("field 'instance.f' must hold integers");
    cfg.instance.f.push_back(c.get<std::int64_t>());
  }
  if (cfg.instance.f.size() != cfg.instance.N + 1) {
    throw ConfigError("field 'instance.f' has " + std::to_string(cfg.instance.f.size()) +
                      " coefficients, expected N+1 = " + std::to_string(cfg.instance.N + 1));
  }
  if (cfg.instance.f.back() != 1) throw ConfigError("field 'instance.f' must be monic (last coefficient 1)");
  if (!(cfg.instance.sigma > 0.0)) throw ConfigError("field 'instance.sigma' must be positive");

  if (root.contains("attack")) {
    const json& at = require_object(root, "attack", "");
    auto& a = cfg.attack;
    a.family = optional_string(at, "family", "attack", "");
    a.M = optional_number<std::uint64_t>(at, "M", "attack", 0);
    a.M0 = optional_number<std::uint64_t>(at, "M0", "attack", 0);
    a.ell = optional_number<std::uint64_t>(at, "ell", "attack", 0);
    a.n = static_cast<unsigned>(optional_number<std::uint64_t>(at, "n", "attack", 1));
    if (at.contains("a") && !at["a"].is_null()) a.a = require_number<std::int64_t>(at, "a", "attack");
    if (at.contains("alpha") && !at["alpha"].is_null()) a.alpha = require_number<std::int64_t>(at, "alpha", "attack");
    a.trials = optional_number<std::uint64_t>(at, "trials", "attack", 1);
    if (at.contains("delta") && !at["delta"].is_null()) a.delta = require_number<double>(at, "delta", "attack");
    a.mc_draws = optional_number<std::uint64_t>(at, "mc_draws", "attack", a.mc_draws);
    a.honest_sampling = optional_bool(at, "honest_sampling", "attack", false);
    a.table_cap = optional_number<double>(at, "table_cap", "attack", a.table_cap);
    a.rq0_cap = optional_number<std::uint64_t>(at, "rq0_cap", "attack", a.rq0_cap);
    if (a.trials == 0) throw ConfigError("field 'attack.trials' must be at least 1");
  }
  cfg.seed = optional_number<std::uint64_t>(root, "seed", "config", 0);
  cfg.threads = static_cast<unsigned>(optional_number<std::uint64_t>(root, "threads", "config", 1));
  cfg.n_max = static_cast<unsigned>(optional_number<std::uint64_t>(root, "n_max", "config", 4));
  cfg.record_dir = optional_string(root, "record_dir", "config", "");
  if (root.contains("output")) {
    const json& out = require_object(root, "output", "");
    cfg.output.path = optional_string(out, "path", "output", "");
    cfg.output.format = optional_string(out, "format", "output", "json");
  }
  if (cfg.output.format != "json" && cfg.output.format != "csv") {
    throw ConfigError("field 'output.format' must be json or csv");
  }
  if (root.contains("reference")) {
    const json& ref = require_object(root, "reference", "");
    if (ref.contains("p_event")) cfg.reference.p_event = require_number<double>(ref, "p_event", "reference");
    if (ref.contains("big_delta")) cfg.reference.big_delta = require_number<double>(ref, "big_delta", "reference");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& cfg, int indent) {
  ordered_json j;
  j["instance"] = {{"N", cfg.instance.N},
                   {"f", cfg.instance.f},
                   {"q", cfg.instance.q},
                   {"sigma", cfg.instance.sigma},
                   {"truncated", cfg.instance.truncated}};
  ordered_json at;
  const auto& a = cfg.attack;
  at["family"] = a.family;
  at["M"] = a.M;
  at["M0"] = a.M0;
  at["ell"] = a.ell;
  at["n"] = a.n;
  at["a"] = a.a ? ordered_json(*a.a) : ordered_json(nullptr);
  at["alpha"] = a.alpha ? ordered_json(*a.alpha) : ordered_json(nullptr);
  at["trials"] = a.trials;
  at["delta"] = a.delta ? ordered_json(*a.delta) : ordered_json(nullptr);
  at["mc_draws"] = a.mc_draws;
  at["honest_sampling"] = a.honest_sampling;
  at["table_cap"] = a.table_cap;
  at["rq0_cap"] = a.rq0_cap;
  j["attack"] = std::move(at);
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["n_max"] = cfg.n_max;
  j["output"] = {{"path", cfg.output.path}, {"format", cfg.output.format}};
  return j.dump(indent);
}

FamilySpec parse_family(const std::string& name) {
  std::string rest = name;
  FamilySpec f{AttackKind::SmallSet, false, false};
  if (rest.rfind("extended_", 0) == 0) {
    f.extended = true;
    rest = rest.substr(9);
  }
  const std::string suffix = "_trace";
  if (rest.size() > suffix.size() && rest.compare(rest.size() - suffix.size(), suffix.size(), suffix) == 0) {
    f.trace = true;
    rest.resize(rest.size() - suffix.size());
  }
  if (rest == "small_set") {
    f.kind = AttackKind::SmallSet;
  } else if (rest == "small_values") {
    f.kind = AttackKind::SmallValues;
  } else if (rest == "unbounded_small_values" && !f.extended) {
    f.kind = AttackKind::Unbounded;
  } else {
    throw ConfigError("unknown attack family '" + name + "' in field 'attack.family'");
  }
  return f;
}

AttackSetup prepare_attack(const ExperimentConfig& cfg) {
  const auto& ac = cfg.attack;
  AttackSetup s{.family = parse_family(ac.family),
                .ctx = make_context(cfg.instance),
                .gauss = GaussianSpec{cfg.instance.sigma, cfg.instance.truncated}};
  const auto& q = s.ctx.modulus();
  const std::uint64_t N = s.ctx.degree();
  const double p0 = s.gauss.p0();

  s.samples_per_trial = s.family.kind == AttackKind::Unbounded && ac.ell > 0 ? ac.ell : ac.M;
  if (s.samples_per_trial == 0) {
    throw ConfigError(s.family.kind == AttackKind::Unbounded ? "field 'attack.ell' must be at least 1"
                                                              : "field 'attack.M' must be at least 1");
  }

  FieldElement w = FieldElement::zero(q);
  std::uint64_t total = N;
  if (!s.family.trace) {
    if (!ac.alpha) throw ConfigError("field 'attack.alpha' is required for F_q attacks");
    s.alpha = FieldElement::from_signed(q, *ac.alpha);
    w = *s.alpha;
    const fq_poly::Poly f(s.ctx.coeffs().begin(), s.ctx.coeffs().end());
    const std::uint64_t fa = fq_poly::eval(f, w.value(), q);
    s.gates.push_back({fa == 0, static_cast<double>(fa), 0.0, "f(alpha) = " + std::to_string(fa) + " mod q, must be 0"});
    s.order = w.is_zero() ? 0 : mult_order(w);
  } else {
    if (ac.n < 2) throw ConfigError("field 'attack.n' must be at least 2 for trace attacks");
    if (!ac.a) throw ConfigError("field 'attack.a' is required for trace attacks");
    w = FieldElement::from_signed(q, *ac.a);
    if (w.is_zero()) throw ConfigError("field 'attack.a' must be nonzero mod q");
    const bool divides = binomial_divides(s.ctx, ac.n, w);
    const bool irreducible = is_irreducible_binomial(ac.n, w);
    const std::string binom = "x^" + std::to_string(ac.n) + " - " + std::to_string(w.value());
    s.gates.push_back({divides, divides ? 0.0 : 1.0, 0.0, binom + " divides f mod q"});
    s.gates.push_back({irreducible, irreducible ? 0.0 : 1.0, 0.0, binom + " is irreducible over F_q"});
    if (!divides || !irreducible) {
      throw PreconditionRefused("precondition failed: " + binom + (divides ? " is reducible" : " does not divide f"));
    }
    s.ext = ExtFieldCtx(ac.n, w);
    s.order = mult_order(w);
    total = trace_term_count(N, ac.n);
  }
  if (!s.gates.front().holds) throw PreconditionRefused("precondition failed: " + s.gates.front().text);

  const VarianceCase vc = s.family.trace ? classify_trace(w, total) : classify_fq(w, total);
  s.sigma_bar = sigma_bar(vc, s.gauss.sigma);

  switch (s.family.kind) {
    case AttackKind::SmallSet: {
      const TableShape shape = sigma_table_shape(s.order, total);
      try {
        s.table = std::make_shared<SigmaTable>(w, shape.r, shape.block_len, s.gauss.sigma, ac.table_cap);
      } catch (const TableTooLarge& e) {
        throw PreconditionRefused(std::string("precondition failed: ") + e.what());
      }
      s.r_eff = shape.r;
      s.gates.push_back(small_set_precondition(s.table->analytic_bound(), q, p0, shape.r));
      break;
    }
    case AttackKind::SmallValues:
      s.r_eff = 1;
      s.gates.push_back(small_values_precondition(s.sigma_bar, q));
      break;
    case AttackKind::Unbounded: {
      const auto series = delta_probability(q, s.sigma_bar);
      s.notes.push_back({true, series.delta, series.p_event, "erf-series delta from sigma_bar"});
      if (ac.delta) {
        s.delta = *ac.delta;
        s.delta_source = "config";
      } else {
        Rng rng(derive_seed(cfg.seed, kDeltaStream));
        const double rate = s.family.trace ? mc_event_rate_trace(s.ctx, s.gauss, *s.ext, ac.mc_draws, rng)
                                           : mc_event_rate_fq(s.ctx, s.gauss, w, ac.mc_draws, rng);
        s.delta = rate - 0.5;
        s.delta_source = "monte_carlo";
      }
      s.gates.push_back(unbounded_precondition(s.delta, q));
      break;
    }
  }

  if (s.family.extended) {
    if (ac.M0 == 0) throw ConfigError("field 'attack.M0' must be at least 1 for extended attacks");
    if (ac.M0 > s.samples_per_trial) throw ConfigError("field 'attack.M0' exceeds 'attack.M'");
    s.M0 = ac.M0;
    if (s.family.kind == AttackKind::SmallSet) {
      s.notes.push_back(extended_small_set_naive_predicate(s.table->analytic_bound(), q, s.M0, p0, s.r_eff));
      s.gates.push_back(
          extended_small_set_separation(static_cast<double>(s.table->size()), q, s.M0, p0, s.r_eff));
    } else {
      s.notes.push_back(extended_small_values_naive_predicate(q, s.M0, p0));
      s.gates.push_back(extended_small_values_separation(q, s.M0, p0));
    }
  }

  std::string failed;
  for (const auto& g : s.gates) {
    if (!g.holds) failed += (failed.empty() ? "" : "; ") + g.text;
  }
  if (!failed.empty()) throw PreconditionRefused("precondition failed: " + failed);
  return s;
}

bool AttackOutcome::says_plwe() const {
  if (decision) return decision->kind == DecisionKind::Plwe;
  return verdict && verdict->kind != VerdictKind::NotPlwe;
}

AttackOutcome run_attack(const AttackSetup& setup, std::span<const Sample> samples, unsigned threads) {
  const AttackOptions opts{threads};
  const auto& fam = setup.family;
  auto basic = [&](std::span<const Sample> S) -> AttackVerdict {
    if (fam.kind == AttackKind::SmallSet) {
      return fam.trace ? small_set_attack_trace(S, *setup.table, *setup.ext, opts)
                       : small_set_attack(S, *setup.table, *setup.alpha, opts);
    }
    return fam.trace ? small_values_attack_trace(S, *setup.ext, opts) : small_values_attack(S, *setup.alpha, opts);
  };
  AttackOutcome out;
  if (fam.kind == AttackKind::Unbounded) {
    out.decision = fam.trace ? unbounded_small_values_attack_trace(samples, setup.delta, *setup.ext, opts)
                             : unbounded_small_values_attack(samples, setup.delta, *setup.alpha, opts);
  } else if (fam.extended) {
    out.decision = extended_attack(samples, setup.M0, basic, setup.r_eff, setup.gauss.p0());
  } else {
    out.verdict = basic(samples);
  }
  return out;
}

TrialRecord run_trial(const AttackSetup& setup, const ExperimentConfig& cfg, std::uint64_t index) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord t;
  t.index = index;
  t.seed = derive_seed(cfg.seed, index);
  Rng rng(t.seed);
  t.truth_plwe = (rng() & 1U) == 1U;
  const PlweInstance inst(setup.ctx, setup.gauss, rng);
  std::vector<Sample> samples;
  try {
    samples = draw_samples(setup, cfg, inst, t.truth_plwe, rng, t.oracle_calls);
  } catch (const BudgetExhausted& e) {
    t.outcome = "error";
    t.error = e.what();
    t.wall_time_ms = elapsed_ms(start);
    return t;
  }
  t.samples = samples.size();
  if (!cfg.record_dir.empty()) {
    std::filesystem::create_directories(cfg.record_dir);
    std::ofstream out(std::filesystem::path(cfg.record_dir) / ("trial_" + std::to_string(index) + ".jsonl"));
    write_samples(out, samples);
  }
  const AttackOutcome outcome = run_attack(setup, samples, 1);
  if (outcome.verdict) {
    const auto& v = *outcome.verdict;
    t.outcome = to_string(v.kind);
    t.survivor_count = v.survivors.size();
    if (v.kind == VerdictKind::Guess) t.guess = v.survivors.front();
    const std::uint64_t tv = true_value(setup, inst.secret_for_testing());
    t.true_value_survived = std::binary_search(v.survivors.begin(), v.survivors.end(), tv);
  } else {
    t.outcome = to_string(outcome.decision->kind);
    t.votes = outcome.decision->votes;
    t.threshold = outcome.decision->threshold;
  }
  t.correct = outcome.says_plwe() == t.truth_plwe;
  t.wall_time_ms = elapsed_ms(start);
  return t;
}

CampaignSummary summarize(std::span<const TrialRecord> trials) {
  CampaignSummary s;
  for (const auto& t : trials) {
    ++s.trials;
    s.oracle_calls += t.oracle_calls;
    s.samples += t.samples;
    if (t.error) ++s.failed_trials;
    const bool said_plwe = t.outcome != "error" && t.correct == t.truth_plwe;
    if (said_plwe) ++s.said_plwe;
    if (t.truth_plwe) {
      ++s.plwe_trials;
      if (t.correct) ++s.correct_on_plwe;
      if (said_plwe) ++s.said_plwe_and_plwe;
      if (t.true_value_survived.value_or(false)) ++s.true_value_survived;
    } else {
      ++s.uniform_trials;
      if (t.correct) ++s.correct_on_uniform;
    }
  }
  return s;
}

double CampaignSummary::rate_plwe() const {
  return plwe_trials == 0 ? 0.0 : static_cast<double>(correct_on_plwe) / static_cast<double>(plwe_trials);
}

double CampaignSummary::rate_uniform() const {
  return uniform_trials == 0 ? 0.0 : static_cast<double>(correct_on_uniform) / static_cast<double>(uniform_trials);
}

double CampaignSummary::accuracy() const {
  return trials == 0 ? 0.0
                     : static_cast<double>(correct_on_plwe + correct_on_uniform) / static_cast<double>(trials);
}

double CampaignSummary::plwe_given_plwe_verdict() const {
  return said_plwe == 0 ? 0.0 : static_cast<double>(said_plwe_and_plwe) / static_cast<double>(said_plwe);
}

double CampaignSummary::calls_per_sample() const {
  return samples == 0 ? 0.0 : static_cast<double>(oracle_calls) / static_cast<double>(samples);
}

CampaignReport run_campaign(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  CampaignReport report{cfg, prepare_attack(cfg), {}, {}, 0.0};
  const std::uint64_t n = cfg.attack.trials;
  report.trials.resize(n);
  const unsigned workers = std::max(1U, std::min<unsigned>(cfg.threads, static_cast<unsigned>(n)));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        report.trials[i] = run_trial(report.setup, cfg, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  report.summary = summarize(report.trials);
  report.wall_time_ms = elapsed_ms(start);
  return report;
}

std::string campaign_digest(const CampaignReport& r) { return fnv1a_hex(campaign_json_body(r, false).dump()); }

std::string campaign_to_json(const CampaignReport& r, bool include_timing, int indent) {
  auto j = campaign_json_body(r, include_timing);
  j["digest"] = campaign_digest(r);
  return j.dump(indent);
}

std::string campaign_to_csv(const CampaignReport& r) {
  std::ostringstream out;
  out << "index,seed,truth,outcome,guess,survivors,true_value_survived,votes,threshold,correct,oracle_calls,error\n";
  for (const auto& t : r.trials) {
    out << t.index << ',' << t.seed << ',' << (t.truth_plwe ? "plwe" : "uniform") << ',' << t.outcome << ',';
    if (t.guess) out << *t.guess;
    out << ',' << t.survivor_count << ',';
    if (t.true_value_survived) out << (*t.true_value_survived ? "true" : "false");
    out << ',';
    if (t.votes) out << *t.votes;
    out << ',';
    if (t.threshold) out << *t.threshold;
    out << ',' << (t.correct ? "true" : "false") << ',' << t.oracle_calls << ',' << t.error.value_or("") << '\n';
  }
  return out.str();
}

std::string cmd_scan(const ExperimentConfig& cfg) {
  const RqContext ctx = make_context(cfg.instance);
  const VulnReport report =
      scan_instance(ctx, cfg.instance.sigma, cfg.instance.truncated, cfg.n_max, cfg.attack.table_cap);
  return to_json(report);
}

std::string cmd_analyze(const ExperimentConfig& cfg, std::optional<double> min_M_target) {
  const RqContext ctx = make_context(cfg.instance);
  const auto& q = ctx.modulus();
  const VulnReport report =
      scan_instance(ctx, cfg.instance.sigma, cfg.instance.truncated, cfg.n_max, cfg.attack.table_cap);
  const double p0 = GaussianSpec{cfg.instance.sigma, cfg.instance.truncated}.p0();
  const double target = min_M_target.value_or(0.99);

  std::optional<std::uint64_t> want_alpha;
  std::optional<std::uint64_t> want_a;
  if (cfg.attack.alpha) want_alpha = q.reduce(*cfg.attack.alpha);
  if (cfg.attack.a) want_a = q.reduce(*cfg.attack.a);

  ordered_json out;
  out["q"] = q.value();
  out["N"] = ctx.degree();
  out["sigma"] = cfg.instance.sigma;
  out["truncated"] = cfg.instance.truncated;
  out["min_M_target"] = target;
  out["entries"] = ordered_json::array();
  for (const auto& e : report.entries) {
    if (want_alpha && !(e.setting == Setting::Fq && e.w.value() == *want_alpha)) continue;
    if (want_a && !(e.setting == Setting::Trace && e.w.value() == *want_a && e.n == cfg.attack.n)) continue;
    auto j = json_io::vuln_entry(e);
    if (e.probability.ratio > kMaxUnboundedRatio) {
      j["warning"] = "distribution ratio exceeds 4 sqrt 2; the bounded small-values attack applies instead";
    }
    ordered_json table = ordered_json::array();
    for (std::uint64_t M : kPosteriorTableM) {
      const auto ss = posterior_bounds(Family::SmallSet, M, q, std::floor(e.table_analytic_size), p0, e.table_r);
      const auto sv = posterior_bounds(Family::SmallValues, M, q, 0.0, p0, 1);
      table.push_back({{"M", M},
                       {"small_set_posterior", ss.plwe_posterior},
                       {"small_set_success", ss.success},
                       {"small_values_posterior", sv.plwe_posterior},
                       {"small_values_success", sv.success}});
    }
    j["posterior_table"] = std::move(table);
    const auto mss = min_samples_for(Family::SmallSet, target, q, std::floor(e.table_analytic_size), p0, e.table_r);
    const auto msv = min_samples_for(Family::SmallValues, target, q, 0.0, p0, 1);
    j["min_M"] = {{"small_set", mss ? ordered_json(*mss) : ordered_json(nullptr)},
                  {"small_values", msv ? ordered_json(*msv) : ordered_json(nullptr)}};
    if ((want_alpha || want_a) && cfg.attack.mc_draws > 0) {
      Rng rng(derive_seed(cfg.seed, kDeltaStream));
      const GaussianSpec gauss{cfg.instance.sigma, cfg.instance.truncated};
      double rate = 0.0;
      if (e.setting == Setting::Fq) {
        rate = mc_event_rate_fq(ctx, gauss, e.w, cfg.attack.mc_draws, rng);
      } else {
        rate = mc_event_rate_trace(ctx, gauss, ExtFieldCtx(e.n, e.w), cfg.attack.mc_draws, rng);
      }
      j["monte_carlo"] = {{"draws", cfg.attack.mc_draws},
                          {"p_event", rate},
                          {"delta", rate - 0.5},
                          {"big_delta", rate - uniform_quarter_rate(q)}};
    }
    if (cfg.reference.p_event || cfg.reference.big_delta) {
      ordered_json ref;
      bool ok = true;
      if (cfg.reference.p_event) {
        const double diff = std::abs(e.probability.p_event - *cfg.reference.p_event);
        ref["p_event"] = *cfg.reference.p_event;
        ref["p_event_abs_diff"] = diff;
        ok = ok && diff < 1e-2;
      }
      if (cfg.reference.big_delta) {
        const double ref_d = *cfg.reference.big_delta;
        const double diff = std::abs(e.probability.big_delta - ref_d);
        ref["big_delta"] = ref_d;
        ref["big_delta_abs_diff"] = diff;
        ok = ok && diff <= 0.1 * std::abs(ref_d);
      }
      ref["reproduced"] = ok;
      j["reference"] = std::move(ref);
    }
    out["entries"].push_back(std::move(j));
  }
  if ((want_alpha || want_a) && out["entries"].empty()) {
    throw ConfigError("the configured root or factor does not occur in f mod q");
  }
  return out.dump(2);
}

std::string f_of_r_csv(std::uint64_t points) {
  std::ostringstream out;
  out << "r,f_r\n";
  char buf[96];
  for (std::uint64_t i = 1; i <= points; ++i) {
    const double r = kMaxUnboundedRatio * static_cast<double>(i) / static_cast<double>(points);
    std::snprintf(buf, sizeof(buf), "%.10g,%.15g\n", r, f_of_r(r));
    out << buf;
  }
  return out.str();
}

std::string cmd_replay(const ExperimentConfig& cfg, const std::string& sample_path) {
  const AttackSetup setup = prepare_attack(cfg);
  std::ifstream in(sample_path);
  if (!in) throw ConfigError("cannot open sample file '" + sample_path + "'");
  const auto samples = read_samples(in, setup.ctx);
  const auto start = std::chrono::steady_clock::now();
  const AttackOutcome outcome = run_attack(setup, samples, std::max(1U, cfg.threads));
  const double ms = elapsed_ms(start);
  if (outcome.verdict) return verdict_to_json(*outcome.verdict, ms, samples.size());
  return decision_to_json(*outcome.decision, ms, samples.size());
}

}  // namespace plwe
