#pragma once

// Random put/delete workload against a Store, followed by an independent
// dangling-reference scan and a trace of every deployment.

#include "dhub/match.hpp"
#include "dhub/random.hpp"
#include "dhub/store.hpp"
#include "fixtures.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace dhub::testing {

struct FuzzReport {
  long operations = 0;
  long accepted = 0;
  long rejected = 0;
  long unexpected = 0;  // exceptions that are not dhub::Error
  std::vector<std::string> dangling;
  long deployments = 0;  // deployment trace checks, taken every 1000 operations and at the end
  long traced = 0;       // checks whose chain resolved to one challenge and one solution
};

/// Every foreign id in `d`, checked by hand against the id sets.
inline std::vector<std::string> scan_dangling(const Dataset& d) {
  std::map<std::string, OrgRole> orgs;
  std::set<std::string> challenges, solutions, profiles{std::string(kDefaultProfileId)}, matches;
  for (const auto& o : d.organizations) orgs[o.id] = o.role;
  for (const auto& c : d.challenges) challenges.insert(c.id);
  for (const auto& s : d.solutions) solutions.insert(s.id);
  for (const auto& p : d.profiles) profiles.insert(p.id);
  for (const auto& m : d.matches) matches.insert(m.id);
  std::vector<std::string> out;
  auto role_is = [&](const std::string& id, OrgRole r) {
    auto it = orgs.find(id);
    return it != orgs.end() && it->second == r;
  };
  for (const auto& c : d.challenges) {
    if (!role_is(c.deployer_id, OrgRole::Deployer)) out.push_back(c.id + " -> " + c.deployer_id);
  }
  for (const auto& s : d.solutions) {
    if (!role_is(s.provider_id, OrgRole::Provider)) out.push_back(s.id + " -> " + s.provider_id);
  }
  for (const auto& m : d.matches) {
    if (!challenges.count(m.challenge_id)) out.push_back(m.id + " -> " + m.challenge_id);
    if (!solutions.count(m.solution_id)) out.push_back(m.id + " -> " + m.solution_id);
    if (!profiles.count(m.profile_id)) out.push_back(m.id + " -> " + m.profile_id);
  }
  for (const auto& dep : d.deployments) {
    if (!matches.count(dep.match_id)) out.push_back(dep.id + " -> " + dep.match_id);
    if (dep.financier_id && !role_is(*dep.financier_id, OrgRole::Financier)) {
      out.push_back(dep.id + " -> " + *dep.financier_id);
    }
  }
  return out;
}

inline void trace_all(const Store& store, FuzzReport& report) {
  for (const auto& d : store.all<Deployment>()) {
    ++report.deployments;
    const auto chain = store.trace(d.id);
    if (chain.match.id == d.match_id && chain.challenge.id == chain.match.challenge_id &&
        chain.solution.id == chain.match.solution_id &&
        chain.deployer.id == chain.challenge.deployer_id &&
        chain.provider.id == chain.solution.provider_id &&
        chain.size() == (d.financier_id ? 7u : 6u)) {
      ++report.traced;
    }
  }
}

inline FuzzReport run_integrity_fuzz(Store& store, std::uint64_t seed, long operations) {
  Rng rng(seed);
  FuzzReport report;
  const auto pool = geo::country_pool();
  const std::vector<std::string> vocabulary{"irrigation", "solar", "drip", "sensors", "training"};

  // Candidate ids are drawn from small ranges so puts, updates, deletes and
  // dangling references all happen often.
  auto id = [&](const char* prefix, int range) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s-%06d", prefix, static_cast<int>(rng.uniform_int(1, range)));
    return std::string(buf);
  };
  auto any_org = [&] { return id("org", 40); };
  auto tags = [&] {
    TagSet t;
    const auto n = rng.uniform_int(1, 3);
    for (int i = 0; i < n; ++i) t.insert(vocabulary[rng.uniform_int(0, 4)]);
    return t;
  };
  auto country = [&] { return std::string(pool[rng.uniform_int(0, 44)]); };
  auto random_match = [&]() -> std::string {
    return store.read([&](const StoreTables& t) -> std::string {
      if (t.matches.empty()) return "mat-none";
      const auto n = rng.uniform_int(0, static_cast<std::int64_t>(t.matches.size()) - 1);
      return std::next(t.matches.begin(), n)->first;
    });
  };
  const std::array<WeightProfile, 2> profiles{default_profile(),
                                              match::normalize_profile({1, 1, 1, 1, 1, 1})};

  for (long op = 0; op < operations; ++op) {
    if (op % 1000 == 999) trace_all(store, report);
    ++report.operations;
    try {
      const auto kind = rng.uniform_int(0, 11);
      switch (kind) {
        case 0:
        case 1: {
          const auto role = static_cast<OrgRole>(rng.uniform_int(0, 2));
          store.put(make_org(any_org(), role, country(), rng.bernoulli(0.5)));
          break;
        }
        case 2: {
          store.put(make_challenge(id("chl", 30), any_org(),
                                   static_cast<Domain>(rng.uniform_int(0, 4)), country(), tags(),
                                   rng.uniform_int(1, 100000),
                                   Money::from_cents(rng.uniform_int(1, 100000000)),
                                   static_cast<int>(rng.uniform_int(1, 36))));
          break;
        }
        case 3: {
          Coverage cov = rng.bernoulli(0.2) ? Coverage::everywhere() : Coverage{false, {country()}};
          const int completed = static_cast<int>(rng.uniform_int(0, 12));
          store.put(make_solution(id("sol", 30), any_org(),
                                  static_cast<Domain>(rng.uniform_int(0, 4)), cov, tags(),
                                  Money::from_cents(rng.uniform_int(1, 100000000)),
                                  static_cast<int>(rng.uniform_int(1, 24)),
                                  rng.uniform_int(1, 100000), completed,
                                  static_cast<int>(rng.uniform_int(0, completed))));
          break;
        }
        case 4:
        case 5: {
          // Score a stored pair when possible, otherwise a made-up dangling one.
          const auto profile = profiles[rng.uniform_int(0, 1)];
          if (rng.bernoulli(0.1)) store.put(profile);
          const auto c = store.find<Challenge>(id("chl", 30));
          const auto s = store.find<Solution>(id("sol", 30));
          if (c && s) {
            const auto p = store.find<Organization>(s->provider_id);
            if (p) store.put(match::score_pair(*c, *s, *p, profile));
          } else {
            MatchResult m = match::score_pair(
                make_challenge("chl-000999", "org-000001"), make_solution("sol-000999", "org-000002"),
                make_org("org-000002", OrgRole::Provider), default_profile());
            store.put(m);
          }
          break;
        }
        case 6: {
          Deployment d;
          d.match_id = rng.bernoulli(0.1) ? "mat-missing" : random_match();
          if (rng.bernoulli(0.6)) d.financier_id = any_org();
          d.committed_usd = Money::from_cents(rng.uniform_int(0, 1000000));
          d.id = id("dep", 20);
          store.put(d);
          break;
        }
        case 7: {
          const auto target = id("dep", 20);
          const auto to = static_cast<DeploymentStatus>(rng.uniform_int(0, 3));
          store.modify(target, [&](Deployment& d) { d.status = to; });
          break;
        }
        default: {
          const auto k = static_cast<EntityKind>(rng.uniform_int(0, 5));
          std::string target;
          switch (k) {
            case EntityKind::Organization: target = any_org(); break;
            case EntityKind::Challenge: target = id("chl", 30); break;
            case EntityKind::Solution: target = id("sol", 30); break;
            case EntityKind::Profile: target = profiles[rng.uniform_int(0, 1)].id; break;
            case EntityKind::Match: target = random_match(); break;
            case EntityKind::Deployment: target = id("dep", 20); break;
          }
          store.remove(k, target);
          break;
        }
      }
      ++report.accepted;
    } catch (const Error&) {
      ++report.rejected;
    } catch (...) {
      ++report.unexpected;
    }
  }

  trace_all(store, report);
  report.dangling = scan_dangling(store.contents());
  for (const auto& p : store.integrity_scan()) report.dangling.push_back("store: " + p);
  return report;
}

}  // namespace dhub::testing
