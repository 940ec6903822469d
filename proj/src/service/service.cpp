#include "dhub/service.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace dhub {
namespace {

bool same_except_time(MatchResult a, const MatchResult& b) {
  a.computed_at = b.computed_at;
  return a == b;
}

bool accepts_milestone_changes(DeploymentStatus s) {
  return s == DeploymentStatus::Proposed || s == DeploymentStatus::Active;
}

void require_open_for_milestones(const Deployment& d) {
  if (!accepts_milestone_changes(d.status)) {
    throw Error(ErrorCode::State, "deployment " + d.id + " is " +
                                      std::string(to_string(d.status)) +
                                      "; milestones can no longer change");
  }
}

std::vector<match::RankedMatch> rank_in(const StoreTables& t, const Challenge& challenge,
                                        const WeightProfile& profile, std::optional<int> top_k,
                                        Timestamp at) {
  std::vector<match::Candidate> candidates;
  candidates.reserve(t.solutions.size());
  for (const auto& [id, s] : t.solutions) {
    candidates.push_back({s, t.organizations.at(s.provider_id)});
  }
  return match::rank_solutions(challenge, candidates, profile, top_k, at);
}

}  // namespace

Service::Service(Store& store, intake::TemplateSet templates, ServiceOptions options)
    : store_(store), templates_(std::move(templates)), options_(std::move(options)) {
  if (!options_.clock) options_.clock = default_clock();
}

WeightProfile Service::resolve_profile(const std::optional<WeightVector>& raw) const {
  if (!raw) return default_profile();
  try {
    return match::normalize_profile(*raw);
  } catch (const Error& e) {
    throw Error(ErrorCode::Validation, e.what(), e.details());
  }
}

std::vector<match::RankedMatch> Service::preview_matches(const std::string& challenge_id,
                                                         const WeightProfile& profile,
                                                         std::optional<int> top_k) const {
  return store_.read([&](const StoreTables& t) {
    auto it = t.challenges.find(challenge_id);
    if (it == t.challenges.end()) {
      throw Error(ErrorCode::NotFound, "challenge " + challenge_id + " not found");
    }
    return rank_in(t, it->second, profile, top_k, Timestamp{});
  });
}

std::vector<match::RankedMatch> Service::compute_matches(
    const std::string& challenge_id, const std::optional<WeightVector>& raw_weights, int top_k) {
  const auto profile = resolve_profile(raw_weights);
  const auto at = options_.clock();
  auto ranked = store_.read([&](const StoreTables& t) {
    auto it = t.challenges.find(challenge_id);
    if (it == t.challenges.end()) {
      throw Error(ErrorCode::NotFound, "challenge " + challenge_id + " not found");
    }
    return rank_in(t, it->second, profile, top_k, at);
  });

  if (!store_.find<WeightProfile>(profile.id)) store_.put(profile);
  for (auto& r : ranked) {
    if (auto stored = store_.find<MatchResult>(r.match.id);
        stored && same_except_time(*stored, r.match)) {
      r.match = *stored;
    } else {
      store_.put(r.match);
    }
  }
  return ranked;
}

std::vector<MatchResult> Service::stored_matches(const std::string& challenge_id,
                                                 const std::optional<std::string>& profile_id) const {
  return store_.read([&](const StoreTables& t) {
    if (!t.challenges.count(challenge_id)) {
      throw Error(ErrorCode::NotFound, "challenge " + challenge_id + " not found");
    }
    std::vector<MatchResult> out;
    for (const auto& [id, m] : t.matches) {
      if (m.challenge_id == challenge_id && (!profile_id || m.profile_id == *profile_id)) {
        out.push_back(m);
      }
    }
    std::stable_sort(out.begin(), out.end(), [](const MatchResult& a, const MatchResult& b) {
      if (a.total != b.total) return a.total > b.total;
      if (a.solution_id != b.solution_id) return a.solution_id < b.solution_id;
      return a.profile_id < b.profile_id;
    });
    return out;
  });
}

std::vector<CoverageCell> Service::coverage() const {
  return store_.read([&](const StoreTables& t) {
    std::map<std::string, CoverageCell> cells;
    auto cell = [&](const std::string& cc) -> CoverageCell& {
      auto& c = cells[cc];
      c.country = cc;
      return c;
    };
    for (const auto& [id, o] : t.organizations) cell(o.country);
    for (const auto& [id, c] : t.challenges) {
      auto& x = cell(c.country);
      if (c.status == ChallengeStatus::Open) ++x.open_challenges;
    }
    for (const auto& [id, s] : t.solutions) {
      for (const auto& cc : s.coverage.countries) cell(cc);
    }
    for (auto& [cc, x] : cells) {
      for (const auto& [id, s] : t.solutions) {
        if (s.coverage.global || s.coverage.includes(cc)) ++x.available_solutions;
      }
    }
    for (const auto& [id, d] : t.deployments) {
      if (d.status != DeploymentStatus::Active) continue;
      const auto& m = t.matches.at(d.match_id);
      ++cell(t.challenges.at(m.challenge_id).country).active_deployments;
    }
    std::vector<CoverageCell> out;
    for (auto& [cc, x] : cells) {
      x.gap = x.open_challenges - x.active_deployments;
      out.push_back(x);
    }
    return out;
  });
}

Deployment Service::create_deployment(const std::string& match_id,
                                      const std::optional<std::string>& financier_id,
                                      Money committed, std::vector<Milestone> milestones) {
  if (!store_.find<MatchResult>(match_id)) {
    throw Error(ErrorCode::NotFound, "match " + match_id + " not found");
  }
  if (financier_id && !store_.find<Organization>(*financier_id)) {
    throw Error(ErrorCode::NotFound, "organization " + *financier_id + " not found");
  }
  Deployment d;
  d.match_id = match_id;
  d.financier_id = financier_id;
  d.committed_usd = committed;
  d.milestones = std::move(milestones);
  d.status = DeploymentStatus::Proposed;
  d.created_at = options_.clock();
  const auto id = store_.insert(std::move(d));
  return store_.get<Deployment>(id);
}

Deployment Service::add_milestone(const std::string& deployment_id, Milestone milestone) {
  return store_.modify(deployment_id, [&](Deployment& d) {
    require_open_for_milestones(d);
    d.milestones.push_back(milestone);
  });
}

Deployment Service::set_milestone_status(const std::string& deployment_id, const std::string& name,
                                         MilestoneStatus status) {
  return store_.modify(deployment_id, [&](Deployment& d) {
    require_open_for_milestones(d);
    auto it = std::find_if(d.milestones.begin(), d.milestones.end(),
                           [&](const Milestone& m) { return m.name == name; });
    if (it == d.milestones.end()) {
      throw Error(ErrorCode::NotFound,
                  "deployment " + d.id + " has no milestone named '" + name + "'");
    }
    it->status = status;
  });
}

Deployment Service::transition(const std::string& deployment_id, DeploymentStatus to) {
  return store_.modify(deployment_id, [&](Deployment& d) {
    if (!is_legal_transition(d.status, to)) {
      throw Error(ErrorCode::State, "deployment " + d.id + ": illegal transition " +
                                        std::string(to_string(d.status)) + " -> " +
                                        std::string(to_string(to)));
    }
    d.status = to;
  });
}

Challenge Service::compile_intake(const std::string& deployer_id, Domain domain,
                                  const std::vector<IntakeAnswer>& answers) const {
  const auto org = store_.get<Organization>(deployer_id);
  if (org.role != OrgRole::Deployer) {
    throw Error(ErrorCode::Integrity,
                "organization " + deployer_id + " is a " + std::string(to_string(org.role)) +
                    ", not a Deployer",
                {deployer_id});
  }
  return intake::compile(templates_, deployer_id, domain, answers);
}

json Service::dashboard(OrgRole role, const std::string& org_id,
                        std::optional<double> threshold) const {
  const auto org = store_.get<Organization>(org_id);
  if (org.role != role) {
    throw Error(ErrorCode::Input, "organization " + org_id + " is a " +
                                      std::string(to_string(org.role)) + ", not a " +
                                      std::string(to_string(role)));
  }
  json body{{"role", to_string(role)}, {"org_id", org_id}};

  if (role == OrgRole::Deployer) {
    const auto profile = default_profile();
    body["profile_id"] = profile.id;
    body["challenges"] = store_.read([&](const StoreTables& t) {
      json list = json::array();
      for (const auto& [id, c] : t.challenges) {
        if (c.deployer_id != org_id) continue;
        json top = json::array();
        for (const auto& r : rank_in(t, c, profile, kDashboardTopK, Timestamp{})) {
          top.push_back(r.match);
        }
        list.push_back({{"challenge", c}, {"top_matches", std::move(top)}});
      }
      return list;
    });
  } else if (role == OrgRole::Provider) {
    const double bar = threshold.value_or(options_.opportunity_threshold);
    body["threshold"] = bar;
    body["solutions"] = store_.read([&](const StoreTables& t) {
      std::map<std::string, std::set<std::string>> hits;
      for (const auto& [id, m] : t.matches) {
        if (m.total >= bar) hits[m.solution_id].insert(m.challenge_id);
      }
      json list = json::array();
      for (const auto& [id, s] : t.solutions) {
        if (s.provider_id != org_id) continue;
        const auto it = hits.find(id);
        const auto n = it == hits.end() ? std::size_t{0} : it->second.size();
        list.push_back({{"solution", s}, {"opportunities", n}});
      }
      return list;
    });
  } else {
    store_.read([&](const StoreTables& t) {
      json list = json::array();
      std::map<DeploymentStatus, Money> sums;
      for (auto s : all_values<DeploymentStatus>()) sums[s] = Money{};
      for (const auto& [id, d] : t.deployments) {
        if (d.financier_id != org_id) continue;
        list.push_back(d);
        sums[d.status] = sums[d.status] + d.committed_usd;
      }
      json totals = json::object();
      for (const auto& [s, m] : sums) totals[std::string(to_string(s))] = m.to_string();
      body["deployments"] = std::move(list);
      body["committed_usd_by_status"] = std::move(totals);
      return 0;
    });
  }
  return body;
}

void to_json(json& j, const CoverageCell& c) {
  j = json{{"country", c.country},
           {"open_challenges", c.open_challenges},
           {"available_solutions", c.available_solutions},
           {"active_deployments", c.active_deployments},
           {"gap", c.gap}};
}

json matches_body(const std::vector<match::RankedMatch>& ranked) {
  json body = json::array();
  for (const auto& r : ranked) body.push_back(r.match);
  return body;
}

}  // namespace dhub
