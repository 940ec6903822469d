#pragma once

// Application operations behind the HTTP API and the CLI. Every method is a
// thin composition of store, match-engine and intake calls; the service keeps
// no mutable state of its own, so all writes go through the store lock.

#include "dhub/intake.hpp"
#include "dhub/match.hpp"
#include "dhub/store.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dhub {

struct CoverageCell {
  std::string country;
  long open_challenges = 0;
  long available_solutions = 0;
  long active_deployments = 0;
  long gap = 0;  // open_challenges - active_deployments

  friend bool operator==(const CoverageCell&, const CoverageCell&) = default;
};

struct ServiceOptions {
  double opportunity_threshold = 70.0;
  Clock clock = default_clock();
};

inline constexpr int kDefaultTopK = 10;
inline constexpr int kDashboardTopK = 3;

class Service {
 public:
  Service(Store& store, intake::TemplateSet templates, ServiceOptions options = {});

  Store& store() { return store_; }
  const intake::TemplateSet& templates() const { return templates_; }
  double opportunity_threshold() const { return options_.opportunity_threshold; }
  Timestamp now() const { return options_.clock(); }

  /// Resolves the profile for an optional raw override. Invalid weights are a
  /// ErrorCode::Validation error.
  WeightProfile resolve_profile(const std::optional<WeightVector>& raw) const;

  /// Ranks every stored solution for the challenge and persists the profile
  /// and the returned results. A stored result that differs only in
  /// computed_at is kept as is.
  std::vector<match::RankedMatch> compute_matches(const std::string& challenge_id,
                                                  const std::optional<WeightVector>& raw_weights,
                                                  int top_k = kDefaultTopK);

  /// Ranking without persisting anything.
  std::vector<match::RankedMatch> preview_matches(const std::string& challenge_id,
                                                  const WeightProfile& profile,
                                                  std::optional<int> top_k) const;

  /// Persisted results for a challenge, best first (ties by solution id).
  std::vector<MatchResult> stored_matches(const std::string& challenge_id,
                                          const std::optional<std::string>& profile_id) const;

  /// One cell per country named by any organization, challenge or explicit
  /// solution coverage, sorted by country code.
  std::vector<CoverageCell> coverage() const;

  Deployment create_deployment(const std::string& match_id,
                               const std::optional<std::string>& financier_id, Money committed,
                               std::vector<Milestone> milestones = {});
  Deployment add_milestone(const std::string& deployment_id, Milestone milestone);
  Deployment set_milestone_status(const std::string& deployment_id, const std::string& name,
                                  MilestoneStatus status);
  Deployment transition(const std::string& deployment_id, DeploymentStatus to);

  /// Draft challenge from intake answers; the deployer must exist.
  Challenge compile_intake(const std::string& deployer_id, Domain domain,
                           const std::vector<IntakeAnswer>& answers) const;

  /// Role-specific aggregates for one organization (role must match).
  json dashboard(OrgRole role, const std::string& org_id,
                 std::optional<double> threshold = std::nullopt) const;

 private:
  Store& store_;
  intake::TemplateSet templates_;
  ServiceOptions options_;
};

void to_json(json& j, const CoverageCell& c);
/// Response body for a ranking: canonical MatchResult objects in rank order.
json matches_body(const std::vector<match::RankedMatch>& ranked);

}  // namespace dhub
