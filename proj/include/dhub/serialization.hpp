#pragma once

// Canonical JSON form of the core entities: snake_case field names matching
// the struct members, RFC 3339 UTC timestamps, money as two-decimal strings.
// Shared by dataset files, store snapshots, the HTTP API and the CLI.

#include "dhub/model.hpp"

#include "json.hpp"

namespace dhub {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void to_json(json& j, const Organization& v);
void from_json(const json& j, Organization& v);
void to_json(json& j, const IntakeAnswer& v);
void from_json(const json& j, IntakeAnswer& v);
void to_json(json& j, const Challenge& v);
void from_json(const json& j, Challenge& v);
void to_json(json& j, const Coverage& v);
void from_json(const json& j, Coverage& v);
void to_json(json& j, const Solution& v);
void from_json(const json& j, Solution& v);
void to_json(json& j, const WeightProfile& v);
void from_json(const json& j, WeightProfile& v);
void to_json(json& j, const DimensionScore& v);
void from_json(const json& j, DimensionScore& v);
void to_json(json& j, const MatchResult& v);
void from_json(const json& j, MatchResult& v);
void to_json(json& j, const Milestone& v);
void from_json(const json& j, Milestone& v);
void to_json(json& j, const Deployment& v);
void from_json(const json& j, Deployment& v);

/// Enum helpers for use inside JSON bodies.
template <class E>
E enum_field(const json& j, const char* key) {
  return enum_from_string<E>(j.at(key).get<std::string>());
}

}  // namespace dhub
