#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lawprice/capital.hpp"
#include "lawprice/friction.hpp"
#include "lawprice/functionals.hpp"
#include "lawprice/orlicz.hpp"
#include "lawprice/quantile.hpp"

namespace lawprice::io {

using Json = nlohmann::json;

struct Scenario {
  AtomSpace space{1};
  std::vector<std::pair<std::string, Payoff>> payoffs;  // sorted by name
};

/// Throws ParseError when the file is missing or not valid JSON.
Json read_json_file(const std::filesystem::path& path);
Json parse_json(const std::string& text);

/// {"n": int, "payoffs": {name: [values]}}. Wrong-length payoffs raise
/// SpaceMismatch; an empty payoff table is a ParseError.
Scenario parse_scenario(const Json& j);
Payoff parse_payoff(const Json& j, std::optional<AtomSpace> space = std::nullopt);

/// Single-column CSV; blank lines are skipped, a non-numeric first line is
/// taken as a header.
Payoff read_payoff_csv(std::istream& in);
void write_payoff_csv(std::ostream& out, const Payoff& x);

Distortion parse_distortion(const Json& j);
FunctionalFlags parse_flags(const Json& j, FunctionalFlags defaults);
/// {"type": "expected_shortfall", "beta": 0.95} and friends; an optional
/// "flags" object overrides the declared flags and "name" renames.
PricingFunctional parse_functional(const Json& j);
Market parse_market(const Json& j);
AcceptanceSet parse_acceptance(const Json& j);
YoungFunction parse_young(const Json& j);

/// Extended reals: infinities become the strings "+inf" / "-inf".
Json number(double v);
Json to_json(const Payoff& x);
Json to_json(const QuantileFn& q);
Json to_json(const FunctionalFlags& f);
Json to_json(const Witness& w);
Json to_json(const FrictionReport& r);
Json to_json(const CollapseReport& r);
Json to_json(const RecessionResult& r);
Json to_json(const RiskResult& r);
Json to_json(const AuditReport& r);
Json to_json(const SchurReport& r);
Json to_json(const PointednessReport& r);
Json to_json(const ClosureReport& r);
Json to_json(const MeanCollapseReport& r);
Json to_json(const NormCheck& r);
Json to_json(const Delta2Report& r);

std::string landscape_csv(const std::vector<LandscapeRow>& rows);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace lawprice::io
