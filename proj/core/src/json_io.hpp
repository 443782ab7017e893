#pragma once

#include <json.hpp>

#include "plwe/analysis.hpp"
#include "plwe/attacks.hpp"

namespace plwe::json_io {

using nlohmann::ordered_json;

ordered_json predicate(const Predicate& p);
ordered_json probability(const ProbabilityReport& r);
ordered_json vuln_entry(const VulnEntry& e);
ordered_json vuln_report(const VulnReport& r);
ordered_json verdict(const AttackVerdict& v);
ordered_json decision(const Decision& d);
ordered_json residues(std::span<const std::uint64_t> values);

}  // namespace plwe::json_io
