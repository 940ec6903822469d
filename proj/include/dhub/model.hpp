#pragma once

// Core entities of the coordination platform and the invariants every other
// module relies on. All entity types are plain value objects.

#include "dhub/error.hpp"

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dhub {

// ---------------------------------------------------------------------------
// Enumerations

enum class OrgRole { Deployer, Provider, Financier };
enum class Domain { Agriculture, Water, Energy, Health, Education };
enum class ScaleTier { Local, National, Regional, Global };
enum class ChallengeStatus { Draft, Open, Matched, Closed };
enum class MilestoneStatus { Pending, Done, Missed };
enum class DeploymentStatus { Proposed, Active, Completed, Cancelled };

/// The six scoring axes, in the fixed order used by every breakdown.
enum class Dimension { Geographic, Temporal, Budget, Capability, Credibility, Population };

inline constexpr std::size_t kDimensionCount = 6;

template <class E>
struct EnumNames;

template <>
struct EnumNames<OrgRole> {
  static constexpr std::array<std::string_view, 3> names{"Deployer", "Provider", "Financier"};
};
template <>
struct EnumNames<Domain> {
  static constexpr std::array<std::string_view, 5> names{"Agriculture", "Water", "Energy", "Health",
                                                         "Education"};
};
template <>
struct EnumNames<ScaleTier> {
  static constexpr std::array<std::string_view, 4> names{"Local", "National", "Regional", "Global"};
};
template <>
struct EnumNames<ChallengeStatus> {
  static constexpr std::array<std::string_view, 4> names{"Draft", "Open", "Matched", "Closed"};
};
template <>
struct EnumNames<MilestoneStatus> {
  static constexpr std::array<std::string_view, 3> names{"Pending", "Done", "Missed"};
};
template <>
struct EnumNames<DeploymentStatus> {
  static constexpr std::array<std::string_view, 4> names{"Proposed", "Active", "Completed",
                                                         "Cancelled"};
};
template <>
struct EnumNames<Dimension> {
  static constexpr std::array<std::string_view, 6> names{"geographic", "temporal",    "budget",
                                                         "capability", "credibility", "population"};
};

template <class E>
constexpr std::string_view to_string(E value) {
  return EnumNames<E>::names[static_cast<std::size_t>(value)];
}

template <class E>
constexpr auto all_values() {
  std::array<E, EnumNames<E>::names.size()> out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<E>(i);
  return out;
}

/// Exact-name lookup; throws ErrorCode::Input for unknown names.
template <class E>
E enum_from_string(std::string_view name) {
  const auto& names = EnumNames<E>::names;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<E>(i);
  }
  throw Error(ErrorCode::Input, "unknown value '" + std::string(name) + "'");
}

inline constexpr std::size_t index_of(Dimension d) { return static_cast<std::size_t>(d); }

/// Lowercase domain name, used as an implicit capability tag.
std::string domain_tag(Domain d);

// ---------------------------------------------------------------------------
// Money: decimal USD with two fractional digits, stored as integer cents.

class Money {
 public:
  constexpr Money() = default;
  static constexpr Money from_cents(std::int64_t cents) { return Money(cents); }
  /// Rounds to the nearest cent (half away from zero).
  static Money from_usd(double usd);
  /// Accepts "123", "123.4", "123.45" with an optional leading '-'. Throws Input.
  static Money parse(std::string_view text);

  constexpr std::int64_t cents() const { return cents_; }
  double usd() const { return static_cast<double>(cents_) / 100.0; }
  /// Always two decimals: "1250000.00".
  std::string to_string() const;

  friend constexpr auto operator<=>(Money, Money) = default;
  friend constexpr Money operator+(Money a, Money b) { return Money(a.cents_ + b.cents_); }

 private:
  constexpr explicit Money(std::int64_t cents) : cents_(cents) {}
  std::int64_t cents_ = 0;
};

// ---------------------------------------------------------------------------
// Time

using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::sys_days;
using Clock = std::function<Timestamp()>;

/// RFC 3339 UTC, second precision: "2024-03-01T12:00:00Z".
std::string format_timestamp(Timestamp t);
Timestamp parse_timestamp(std::string_view text);
/// "2024-03-01".
std::string format_date(Date d);
Date parse_date(std::string_view text);

/// Wall clock, unless SOURCE_DATE_EPOCH is set, in which case that instant.
Timestamp default_now();
Clock default_clock();

// ---------------------------------------------------------------------------
// Tags

using TagSet = std::set<std::string>;

/// Trims ASCII whitespace and lowercases.
std::string normalize_tag(std::string_view raw);
/// Normalizes each tag and drops the ones that end up empty.
TagSet normalize_tags(const TagSet& raw);

// ---------------------------------------------------------------------------
// Entities

struct Organization {
  std::string id;
  std::string name;
  OrgRole role = OrgRole::Deployer;
  std::string country;
  std::string region;
  std::set<Domain> domains;
  bool verified = false;
  ScaleTier scale_tier = ScaleTier::Local;
  Timestamp created_at{};

  friend bool operator==(const Organization&, const Organization&) = default;
};

struct IntakeAnswer {
  std::string question_id;
  std::string answer;

  friend bool operator==(const IntakeAnswer&, const IntakeAnswer&) = default;
};

struct Challenge {
  std::string id;
  std::string deployer_id;
  std::string title;
  Domain domain = Domain::Agriculture;
  std::string country;
  TagSet required_tags;
  std::int64_t affected_population = 0;
  Money budget_usd;
  int window_months = 0;
  ChallengeStatus status = ChallengeStatus::Draft;
  std::vector<IntakeAnswer> intake_answers;

  friend bool operator==(const Challenge&, const Challenge&) = default;
};

/// Either every country, or an explicit non-empty list.
struct Coverage {
  bool global = false;
  std::set<std::string> countries;

  static Coverage everywhere() { return Coverage{true, {}}; }
  /// True when the country is listed explicitly; GLOBAL is not implied.
  bool includes(std::string_view country) const;

  friend bool operator==(const Coverage&, const Coverage&) = default;
};

struct Solution {
  std::string id;
  std::string provider_id;
  std::string title;
  Domain domain = Domain::Agriculture;
  TagSet tags;
  Coverage coverage;
  Money cost_usd;
  int lead_time_months = 0;
  std::int64_t capacity_population = 0;
  int deployments_completed = 0;
  int deployments_successful = 0;

  friend bool operator==(const Solution&, const Solution&) = default;
};

/// Weights indexed by Dimension.
using WeightVector = std::array<double, kDimensionCount>;

struct WeightProfile {
  std::string id;
  WeightVector weights{};

  double weight(Dimension d) const { return weights[index_of(d)]; }

  friend bool operator==(const WeightProfile&, const WeightProfile&) = default;
};

inline constexpr std::string_view kDefaultProfileId = "wpf-default";

/// The built-in calibration: geographic 0.20, temporal 0.15, budget 0.20,
/// capability 0.25, credibility 0.15, population 0.05.
WeightProfile default_profile();

struct DimensionScore {
  Dimension dimension = Dimension::Geographic;
  double raw = 0.0;
  double weight = 0.0;
  double contribution = 0.0;  // points, 100 * raw * weight
  std::string reason;

  friend bool operator==(const DimensionScore&, const DimensionScore&) = default;
};

struct MatchResult {
  std::string id;
  std::string challenge_id;
  std::string solution_id;
  std::string profile_id;
  std::vector<DimensionScore> breakdown;
  double total = 0.0;  // points in [0, 100]
  Timestamp computed_at{};

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

/// "mat-<challenge>-<solution>-<profile>": one record per scored triple.
std::string match_id_for(std::string_view challenge_id, std::string_view solution_id,
                         std::string_view profile_id);

struct Milestone {
  std::string name;
  Date due{};
  MilestoneStatus status = MilestoneStatus::Pending;

  friend bool operator==(const Milestone&, const Milestone&) = default;
};

struct Deployment {
  std::string id;
  std::string match_id;
  std::optional<std::string> financier_id;
  Money committed_usd;
  std::vector<Milestone> milestones;
  DeploymentStatus status = DeploymentStatus::Proposed;
  Timestamp created_at{};

  friend bool operator==(const Deployment&, const Deployment&) = default;
};

/// Proposed->Active, Proposed->Cancelled, Active->Completed, Active->Cancelled.
bool is_legal_transition(DeploymentStatus from, DeploymentStatus to);

// ---------------------------------------------------------------------------
// Validation. Violations are data: every broken invariant is reported.

struct ValidationResult {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationResult validate_entity(const Organization& org);
ValidationResult validate_entity(const Challenge& challenge);
ValidationResult validate_entity(const Solution& solution);
ValidationResult validate_entity(const WeightProfile& profile);
ValidationResult validate_entity(const MatchResult& match);
ValidationResult validate_entity(const Deployment& deployment);

inline constexpr double kWeightSumTolerance = 1e-9;
inline constexpr double kTotalTolerance = 1e-6;

}  // namespace dhub
