#include "plwe/serialization.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "json_io.hpp"

namespace plwe {

namespace json_io {

ordered_json predicate(const Predicate& p) {
  return {{"holds", p.holds}, {"lhs", p.lhs}, {"rhs", p.rhs}, {"inequality", p.text}};
}

ordered_json probability(const ProbabilityReport& r) {
  return {{"p_event", r.p_event},
          {"delta", r.delta},
          {"big_delta", r.big_delta},
          {"ratio", r.ratio},
          {"terms_used", r.terms_used}};
}

ordered_json vuln_entry(const VulnEntry& e) {
  ordered_json j;
  j["setting"] = to_string(e.setting);
  j["n"] = e.n;
  j[e.setting == Setting::Fq ? "alpha" : "a"] = e.w.value();
  j["order"] = e.order;
  j["case"] = to_string(e.variance.kind);
  j["terms_total"] = e.variance.terms_total;
  j["block_len"] = e.variance.block_len;
  j["sigma_bar"] = e.sigma_bar;
  j["probability"] = probability(e.probability);
  j["ratio_in_unbounded_range"] = e.probability.ratio <= kMaxUnboundedRatio;
  j["sigma_table"] = {{"r", e.table_r},
                      {"block_len", e.table_block_len},
                      {"analytic_size", e.table_analytic_size},
                      {"tuple_count", e.table_tuple_count},
                      {"feasible", e.table_feasible}};
  ordered_json attacks;
  attacks["small_set"] = predicate(e.small_set);
  attacks["small_set"]["applicable"] = e.small_set.holds && e.table_feasible;
  if (e.min_M_small_set) attacks["small_set"]["min_M_for_0.99"] = *e.min_M_small_set;
  attacks["small_values"] = predicate(e.small_values);
  attacks["small_values"]["applicable"] = e.small_values.holds;
  attacks["unbounded_small_values"] = predicate(e.unbounded);
  attacks["unbounded_small_values"]["applicable"] = e.unbounded.holds;
  j["attacks"] = std::move(attacks);
  return j;
}

ordered_json vuln_report(const VulnReport& r) {
  ordered_json j;
  j["q"] = r.q;
  j["N"] = r.N;
  j["sigma"] = r.sigma;
  j["truncated"] = r.truncated;
  j["entries"] = ordered_json::array();
  for (const auto& e : r.entries) j["entries"].push_back(vuln_entry(e));
  return j;
}

ordered_json residues(std::span<const std::uint64_t> values) {
  return ordered_json(std::vector<std::uint64_t>(values.begin(), values.end()));
}

ordered_json verdict(const AttackVerdict& v) {
  ordered_json j;
  j["verdict"] = to_string(v.kind);
  if (v.kind == VerdictKind::Guess) j["guess"] = v.survivors.front();
  if (v.kind == VerdictKind::NotEnoughSamples) j["survivors"] = residues(v.survivors);
  return j;
}

ordered_json decision(const Decision& d) {
  return {{"verdict", to_string(d.kind)}, {"votes", d.votes}, {"threshold", d.threshold}};
}

}  // namespace json_io

namespace {

std::vector<std::int64_t> int_array(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_array()) throw ConfigError(std::string("missing array field '") + field + "'");
  std::vector<std::int64_t> out;
  for (const auto& v : j[field]) {
    if (!v.is_number_integer()) throw ConfigError(std::string("field '") + field + "' must hold integers");
    out.push_back(v.get<std::int64_t>());
  }
  return out;
}

RingPoly poly_field(const nlohmann::json& j, const char* field, const RqContext& ctx) {
  if (!j.contains(field) || !j[field].is_array()) throw ConfigError(std::string("missing array field '") + field + "'");
  std::vector<std::uint64_t> c;
  for (const auto& v : j[field]) {
    if (!v.is_number_unsigned()) throw ConfigError(std::string("field '") + field + "' must hold residues");
    c.push_back(v.get<std::uint64_t>());
  }
  if (c.size() != ctx.degree()) {
    throw ConfigError(std::string("field '") + field + "' has " + std::to_string(c.size()) +
                      " coefficients, expected " + std::to_string(ctx.degree()));
  }
  for (auto x : c) {
    if (x >= ctx.modulus().value()) throw ConfigError(std::string("field '") + field + "' holds a value >= q");
  }
  return RingPoly(std::move(c));
}

}  // namespace

RqContext polynomial_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("polynomial document is not JSON: ") + e.what());
  }
  if (!j.contains("q") || !j["q"].is_number_unsigned()) throw ConfigError("missing field 'q'");
  if (!j.contains("N") || !j["N"].is_number_unsigned()) throw ConfigError("missing field 'N'");
  auto f = int_array(j, "f");
  if (f.size() != j["N"].get<std::uint64_t>() + 1) throw ConfigError("field 'f' must have N+1 coefficients");
  return RqContext(std::move(f), PrimeModulus(j["q"].get<std::uint64_t>()));
}

std::string polynomial_to_json(const RqContext& ctx) {
  nlohmann::ordered_json j;
  j["N"] = ctx.degree();
  j["f"] = std::vector<std::int64_t>(ctx.integer_coeffs().begin(), ctx.integer_coeffs().end());
  j["q"] = ctx.modulus().value();
  return j.dump();
}

std::string sample_to_json_line(const Sample& s) {
  nlohmann::ordered_json j;
  j["a"] = json_io::residues(s.a.coeffs());
  j["b"] = json_io::residues(s.b.coeffs());
  return j.dump();
}

std::vector<Sample> read_samples(std::istream& in, const RqContext& ctx) {
  std::vector<Sample> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out.push_back({poly_field(j, "a", ctx), poly_field(j, "b", ctx)});
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("sample line " + std::to_string(number) + ": " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError("sample line " + std::to_string(number) + ": " + e.what());
    }
  }
  if (out.empty()) throw ConfigError("sample file holds no samples");
  return out;
}

void write_samples(std::ostream& out, std::span<const Sample> samples) {
  for (const auto& s : samples) out << sample_to_json_line(s) << '\n';
}

std::string to_json(const ProbabilityReport& r, int indent) { return json_io::probability(r).dump(indent); }

std::string to_json(const VulnReport& r, int indent) { return json_io::vuln_report(r).dump(indent); }

std::string verdict_to_json(const AttackVerdict& v, double wall_time_ms, std::uint64_t samples_used, int indent) {
  auto j = json_io::verdict(v);
  j["wall_time_ms"] = wall_time_ms;
  j["samples_used"] = samples_used;
  return j.dump(indent);
}

std::string decision_to_json(const Decision& d, double wall_time_ms, std::uint64_t samples_used, int indent) {
  auto j = json_io::decision(d);
  j["wall_time_ms"] = wall_time_ms;
  j["samples_used"] = samples_used;
  return j.dump(indent);
}

}  // namespace plwe
