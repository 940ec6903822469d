#pragma once

// Shared builders and independent reference computations for the test
// suites. The oracles below are written from the scoring rules directly and
// share no code with the engine beyond the region table.

#include "dhub/dataset.hpp"
#include "dhub/geo.hpp"
#include "dhub/model.hpp"
#include "dhub/synth.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <iterator>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace dhub::testing {

inline Organization make_org(std::string id, OrgRole role, std::string country = "KE",
                             bool verified = true) {
  Organization o;
  o.id = std::move(id);
  o.name = "Org " + o.id;
  o.role = role;
  o.region = geo::region_of(country);
  o.country = std::move(country);
  o.domains = {Domain::Agriculture};
  o.verified = verified;
  o.scale_tier = ScaleTier::National;
  o.created_at = parse_timestamp("2024-03-01T12:00:00Z");
  return o;
}

inline Challenge make_challenge(std::string id, std::string deployer_id,
                                Domain domain = Domain::Agriculture, std::string country = "KE",
                                TagSet tags = {"irrigation", "solar"},
                                std::int64_t population = 50000,
                                Money budget = Money::from_cents(100000000), int window = 12) {
  Challenge c;
  c.id = std::move(id);
  c.deployer_id = std::move(deployer_id);
  c.title = "Need " + c.id;
  c.domain = domain;
  c.country = std::move(country);
  c.required_tags = std::move(tags);
  c.affected_population = population;
  c.budget_usd = budget;
  c.window_months = window;
  c.status = ChallengeStatus::Open;
  return c;
}

inline Solution make_solution(std::string id, std::string provider_id,
                              Domain domain = Domain::Agriculture,
                              Coverage coverage = Coverage{false, {"KE"}},
                              TagSet tags = {"irrigation", "drip"},
                              Money cost = Money::from_cents(80000000), int lead = 6,
                              std::int64_t capacity = 100000, int completed = 8,
                              int successful = 6) {
  Solution s;
  s.id = std::move(id);
  s.provider_id = std::move(provider_id);
  s.title = "Offer " + s.id;
  s.domain = domain;
  s.tags = std::move(tags);
  s.coverage = std::move(coverage);
  s.cost_usd = cost;
  s.lead_time_months = lead;
  s.capacity_population = capacity;
  s.deployments_completed = completed;
  s.deployments_successful = successful;
  return s;
}

inline const Dataset& seed42() {
  static const Dataset d = synth::generate(synth::GenConfig{});
  return d;
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("dhub-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// ---------------------------------------------------------------------------
// Reference scoring

namespace oracle {

inline constexpr std::array<double, 6> kDefaultWeights{0.20, 0.15, 0.20, 0.25, 0.15, 0.05};

inline double weighted_total(const std::array<double, 6>& f, const std::array<double, 6>& w) {
  double sum = 0;
  for (int k = 0; k < 6; ++k) sum += 100.0 * f[k] * w[k];
  return sum;
}

inline std::string lower(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

inline double geographic(const Challenge& c, const Solution& s) {
  if (!s.coverage.global) {
    for (const auto& cc : s.coverage.countries) {
      if (cc == c.country) return 1.0;
    }
  } else {
    return 0.8;
  }
  for (const auto& cc : s.coverage.countries) {
    if (geo::region_of(cc) == geo::region_of(c.country)) return 0.5;
  }
  return 0.0;
}

inline double temporal(const Challenge& c, const Solution& s) {
  return s.lead_time_months <= c.window_months
             ? 1.0
             : static_cast<double>(c.window_months) / s.lead_time_months;
}

inline double budget(const Challenge& c, const Solution& s) {
  const double r = c.budget_usd.usd() / s.cost_usd.usd();
  return r >= 1.0 ? 1.0 : r;
}

inline double capability(const Challenge& c, const Solution& s) {
  std::set<std::string> a(c.required_tags.begin(), c.required_tags.end());
  std::set<std::string> b(s.tags.begin(), s.tags.end());
  a.insert(lower(std::string(to_string(c.domain))));
  b.insert(lower(std::string(to_string(s.domain))));
  std::vector<std::string> both, any;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(any));
  return static_cast<double>(both.size()) / static_cast<double>(any.size());
}

inline double credibility(const Solution& s, const Organization& p) {
  return 0.5 * (p.verified ? 1.0 : 0.0) +
         0.5 * (s.deployments_successful + 1.0) / (s.deployments_completed + 2.0);
}

inline double population(const Challenge& c, const Solution& s) {
  const double r = static_cast<double>(s.capacity_population) / c.affected_population;
  return r >= 1.0 ? 1.0 : r;
}

inline std::array<double, 6> scores(const Challenge& c, const Solution& s, const Organization& p) {
  return {geographic(c, s), temporal(c, s), budget(c, s),
          capability(c, s), credibility(s, p), population(c, s)};
}

struct Scored {
  std::string solution_id;
  double total;
};

/// Score every solution and sort: total descending, then id ascending.
inline std::vector<Scored> brute_force_ranking(const Dataset& d, const Challenge& c,
                                               const std::array<double, 6>& w) {
  std::vector<Scored> out;
  for (const auto& s : d.solutions) {
    const Organization* p = nullptr;
    for (const auto& o : d.organizations) {
      if (o.id == s.provider_id) p = &o;
    }
    out.push_back({s.id, weighted_total(scores(c, s, *p), w)});
  }
  // insertion sort keeps this independent of std::sort's comparator handling
  for (std::size_t i = 1; i < out.size(); ++i) {
    for (std::size_t j = i; j > 0; --j) {
      const auto& a = out[j - 1];
      const auto& b = out[j];
      const bool swap = b.total > a.total || (b.total == a.total && b.solution_id < a.solution_id);
      if (!swap) break;
      std::swap(out[j - 1], out[j]);
    }
  }
  return out;
}

}  // namespace oracle
}  // namespace dhub::testing
