#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "plwe/analysis.hpp"
#include "plwe/attacks.hpp"
#include "plwe/samplers.hpp"

namespace plwe {

// {"N": int, "f": [c0, ..., cN], "q": int}
RqContext polynomial_from_json(const std::string& text);
std::string polynomial_to_json(const RqContext& ctx);

// One sample per line: {"a": [...], "b": [...]}.
std::string sample_to_json_line(const Sample& s);
// Throws ConfigError naming the 1-based line on malformed input or an empty stream.
std::vector<Sample> read_samples(std::istream& in, const RqContext& ctx);
void write_samples(std::ostream& out, std::span<const Sample> samples);

std::string to_json(const ProbabilityReport& r, int indent = 2);
std::string to_json(const VulnReport& r, int indent = 2);
std::string verdict_to_json(const AttackVerdict& v, double wall_time_ms, std::uint64_t samples_used, int indent = 2);
std::string decision_to_json(const Decision& d, double wall_time_ms, std::uint64_t samples_used, int indent = 2);

}  // namespace plwe
