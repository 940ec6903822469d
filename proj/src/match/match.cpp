#include "dhub/match.hpp"

#include "dhub/geo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>

namespace dhub::match {
namespace {

constexpr double kGlobalCoverageScore = 0.8;
constexpr double kSameRegionScore = 0.5;
// Weights are kept on a 1e-12 grid; dividing by the exact 1e12 yields the
// double nearest to the decimal value.
constexpr double kWeightScale = 1e12;
// Absorbs binary representation error (e.g. 11.999999999999998) before
// rounding a display value.
constexpr double kDisplayEpsilon = 1e-9;

TagSet with_domain(const TagSet& tags, Domain domain) {
  TagSet out = tags;
  out.insert(domain_tag(domain));
  return out;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string header_sentence(Dimension d, double raw, double weight) {
  return std::string(dimension_label(d)) + " " + format_fixed(raw, 3) + " at weight " +
         format_fixed(weight, 3);
}

std::string percent(double fraction) { return format_fixed(fraction * 100.0, 1) + "%"; }

std::string geographic_detail(const Challenge& c, const Solution& s) {
  if (s.coverage.includes(c.country)) return "coverage includes " + c.country;
  if (s.coverage.global) return "global coverage reaches " + c.country;
  const auto region = geo::region_of(c.country);
  for (const auto& country : s.coverage.countries) {
    if (region != geo::kUnknownRegion && geo::region_of(country) == region) {
      return "coverage shares region " + region + " with " + c.country + " via " + country;
    }
  }
  return "no coverage in or near " + c.country;
}

std::string temporal_detail(const Challenge& c, const Solution& s) {
  const auto lead = std::to_string(s.lead_time_months);
  const auto window = std::to_string(c.window_months);
  if (s.lead_time_months <= c.window_months) {
    return "lead time " + lead + " months fits the " + window + "-month window";
  }
  return "lead time " + lead + " months exceeds the " + window + "-month window";
}

std::string budget_detail(const Challenge& c, const Solution& s, double raw) {
  if (c.budget_usd >= s.cost_usd) {
    return "budget " + c.budget_usd.to_string() + " USD covers cost " + s.cost_usd.to_string() +
           " USD";
  }
  return "budget " + c.budget_usd.to_string() + " USD covers " + percent(raw) + " of cost " +
         s.cost_usd.to_string() + " USD";
}

std::string capability_detail(const Challenge& c, const Solution& s) {
  const auto a = with_domain(c.required_tags, c.domain);
  const auto b = with_domain(s.tags, s.domain);
  std::vector<std::string> shared;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
  TagSet all = a;
  all.insert(b.begin(), b.end());
  if (shared.empty()) return "no capability tags shared out of " + std::to_string(all.size());
  return std::to_string(shared.size()) + " of " + std::to_string(all.size()) +
         " capability tags shared (" + join(shared, ", ") + ")";
}

std::string credibility_detail(const Solution& s, const Organization& provider) {
  std::string out = provider.verified ? "verified provider" : "unverified provider";
  if (s.deployments_completed == 0) return out + ", no deployment history";
  return out + ", " + std::to_string(s.deployments_successful) + " of " +
         std::to_string(s.deployments_completed) + " past deployments successful";
}

std::string population_detail(const Challenge& c, const Solution& s, double raw) {
  const auto cap = std::to_string(s.capacity_population);
  const auto need = std::to_string(c.affected_population);
  if (s.capacity_population >= c.affected_population) {
    return "capacity " + cap + " covers " + need + " affected";
  }
  return "capacity " + cap + " reaches " + percent(raw) + " of " + need + " affected";
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string_view dimension_label(Dimension d) {
  switch (d) {
    case Dimension::Geographic: return "Geographic fit";
    case Dimension::Temporal: return "Temporal fit";
    case Dimension::Budget: return "Budget fit";
    case Dimension::Capability: return "Capability fit";
    case Dimension::Credibility: return "Provider credibility";
    case Dimension::Population: return "Population alignment";
  }
  return "";
}

double geographic_fit(const Challenge& challenge, const Solution& solution) {
  if (solution.coverage.includes(challenge.country)) return 1.0;
  if (solution.coverage.global) return kGlobalCoverageScore;
  const auto region = geo::region_of(challenge.country);
  if (region == geo::kUnknownRegion) return 0.0;
  for (const auto& country : solution.coverage.countries) {
    if (geo::is_alpha2_shape(country) && geo::region_of(country) == region) return kSameRegionScore;
  }
  return 0.0;
}

double temporal_fit(const Challenge& challenge, const Solution& solution) {
  if (solution.lead_time_months <= challenge.window_months) return 1.0;
  return static_cast<double>(challenge.window_months) / solution.lead_time_months;
}

double budget_fit(const Challenge& challenge, const Solution& solution) {
  return std::min(challenge.budget_usd.usd() / solution.cost_usd.usd(), 1.0);
}

double capability_fit(const Challenge& challenge, const Solution& solution) {
  const auto a = with_domain(challenge.required_tags, challenge.domain);
  const auto b = with_domain(solution.tags, solution.domain);
  std::size_t shared = 0;
  for (const auto& t : a) shared += b.count(t);
  const std::size_t united = a.size() + b.size() - shared;
  return static_cast<double>(shared) / static_cast<double>(united);
}

double provider_credibility(const Solution& solution, const Organization& provider) {
  const double success = (solution.deployments_successful + 1.0) /
                         (solution.deployments_completed + 2.0);
  return 0.5 * (provider.verified ? 1.0 : 0.0) + 0.5 * success;
}

double population_alignment(const Challenge& challenge, const Solution& solution) {
  return std::min(static_cast<double>(solution.capacity_population) /
                      static_cast<double>(challenge.affected_population),
                  1.0);
}

std::vector<DimensionScore> weigh(const ScoreVector& scores, const WeightProfile& profile) {
  std::vector<DimensionScore> out;
  out.reserve(kDimensionCount);
  for (auto d : all_values<Dimension>()) {
    const double raw = scores[index_of(d)];
    const double w = profile.weight(d);
    out.push_back({d, raw, w, 100.0 * raw * w, header_sentence(d, raw, w) + "."});
  }
  return out;
}

double total_of(const std::vector<DimensionScore>& breakdown) {
  double sum = 0.0;
  for (const auto& s : breakdown) sum += s.contribution;
  return std::clamp(sum, 0.0, 100.0);
}

MatchResult score_pair(const Challenge& challenge, const Solution& solution,
                       const Organization& provider, const WeightProfile& profile,
                       Timestamp computed_at) {
  if (provider.id != solution.provider_id) {
    throw Error(ErrorCode::Input, "provider " + provider.id + " does not match solution " +
                                      solution.id + " (provider_id " + solution.provider_id + ")");
  }
  ScoreVector f{};
  f[index_of(Dimension::Geographic)] = geographic_fit(challenge, solution);
  f[index_of(Dimension::Temporal)] = temporal_fit(challenge, solution);
  f[index_of(Dimension::Budget)] = budget_fit(challenge, solution);
  f[index_of(Dimension::Capability)] = capability_fit(challenge, solution);
  f[index_of(Dimension::Credibility)] = provider_credibility(solution, provider);
  f[index_of(Dimension::Population)] = population_alignment(challenge, solution);

  auto breakdown = weigh(f, profile);
  const std::array<std::string, kDimensionCount> details{
      geographic_detail(challenge, solution),
      temporal_detail(challenge, solution),
      budget_detail(challenge, solution, f[index_of(Dimension::Budget)]),
      capability_detail(challenge, solution),
      credibility_detail(solution, provider),
      population_detail(challenge, solution, f[index_of(Dimension::Population)]),
  };
  for (auto& s : breakdown) {
    s.reason = header_sentence(s.dimension, s.raw, s.weight) + ": " + details[index_of(s.dimension)] + ".";
  }

  MatchResult m;
  m.id = match_id_for(challenge.id, solution.id, profile.id);
  m.challenge_id = challenge.id;
  m.solution_id = solution.id;
  m.profile_id = profile.id;
  m.total = total_of(breakdown);
  m.breakdown = std::move(breakdown);
  m.computed_at = computed_at;
  return m;
}

std::vector<RankedMatch> rank_solutions(const Challenge& challenge,
                                        std::span<const Candidate> candidates,
                                        const WeightProfile& profile, std::optional<int> top_k,
                                        Timestamp computed_at) {
  if (top_k && *top_k <= 0) {
    throw Error(ErrorCode::Input, "top_k must be >= 1 (got " + std::to_string(*top_k) + ")");
  }
  std::vector<RankedMatch> ranked;
  ranked.reserve(candidates.size());
  for (const auto& c : candidates) {
    ranked.push_back({0, score_pair(challenge, c.solution.get(), c.provider.get(), profile,
                                    computed_at)});
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedMatch& a, const RankedMatch& b) {
    if (a.match.total != b.match.total) return a.match.total > b.match.total;
    return a.match.solution_id < b.match.solution_id;
  });
  if (top_k && ranked.size() > static_cast<std::size_t>(*top_k)) ranked.resize(*top_k);
  for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = static_cast<int>(i + 1);
  return ranked;
}

std::string profile_id_for(const WeightVector& weights) {
  if (weights == default_profile().weights) return std::string(kDefaultProfileId);
  std::string canonical;
  for (double w : weights) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12f;", w);
    canonical += buf;
  }
  char id[24];
  std::snprintf(id, sizeof id, "wpf-%016llx", static_cast<unsigned long long>(fnv1a64(canonical)));
  return id;
}

WeightProfile normalize_profile(const WeightVector& raw) {
  double sum = 0.0;
  for (auto d : all_values<Dimension>()) {
    const double r = raw[index_of(d)];
    if (!std::isfinite(r)) {
      throw Error(ErrorCode::Input, "weight " + std::string(to_string(d)) + " is not finite");
    }
    if (r < 0.0) {
      throw Error(ErrorCode::Input, "weight " + std::string(to_string(d)) + " is negative");
    }
    sum += r;
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    throw Error(ErrorCode::Input, "degenerate profile: raw weights must have a positive finite sum");
  }
  WeightProfile p;
  for (std::size_t k = 0; k < kDimensionCount; ++k) {
    p.weights[k] = std::round(raw[k] / sum * kWeightScale) / kWeightScale;
  }
  p.id = profile_id_for(p.weights);
  return p;
}

long long round_half_up_tenths(double value) {
  return static_cast<long long>(std::floor(value * 10.0 + 0.5 + kDisplayEpsilon));
}

std::string format_tenths(long long tenths) {
  const bool negative = tenths < 0;
  const long long mag = negative ? -tenths : tenths;
  return (negative ? "-" : "") + std::to_string(mag / 10) + "." + std::to_string(mag % 10);
}

std::string format_fixed(double value, int decimals) {
  long long scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  const auto n = static_cast<long long>(std::floor(value * scale + 0.5 + kDisplayEpsilon));
  std::string frac = std::to_string(n % scale);
  if (decimals == 0) return std::to_string(n);
  frac.insert(0, static_cast<std::size_t>(decimals) - frac.size(), '0');
  return std::to_string(n / scale) + "." + frac;
}

std::array<long long, kDimensionCount> display_tenths(const MatchResult& match) {
  std::array<long long, kDimensionCount> shown{};
  std::array<double, kDimensionCount> remainder{};
  long long floor_sum = 0;
  for (std::size_t k = 0; k < kDimensionCount && k < match.breakdown.size(); ++k) {
    const double exact = match.breakdown[k].contribution * 10.0;
    shown[k] = static_cast<long long>(std::floor(exact + kDisplayEpsilon));
    remainder[k] = std::max(0.0, exact - static_cast<double>(shown[k]));
    floor_sum += shown[k];
  }
  long long deficit = round_half_up_tenths(match.total) - floor_sum;

  std::array<std::size_t, kDimensionCount> order{};
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; deficit > 0 && i < order.size(); ++i, --deficit) ++shown[order[i]];
  for (auto it = order.rbegin(); deficit < 0 && it != order.rend(); ++it) {
    if (shown[*it] > 0) {
      --shown[*it];
      ++deficit;
    }
  }
  return shown;
}

std::vector<std::string> explain(const MatchResult& match) {
  const auto tenths = display_tenths(match);
  std::vector<std::string> lines;
  lines.reserve(kDimensionCount + 1);
  for (std::size_t k = 0; k < kDimensionCount; ++k) {
    const auto d = static_cast<Dimension>(k);
    const std::string reason =
        k < match.breakdown.size() ? match.breakdown[k].reason : std::string{};
    char head[48];
    std::snprintf(head, sizeof head, "%-12s %5s pts  ", std::string(to_string(d)).c_str(),
                  format_tenths(tenths[k]).c_str());
    lines.push_back(head + reason);
  }
  char summary[64];
  std::snprintf(summary, sizeof summary, "%-12s %5s / 100 points", "total",
                format_tenths(round_half_up_tenths(match.total)).c_str());
  lines.push_back(std::string(summary) + " for " + match.solution_id + " against " +
                  match.challenge_id + " (profile " + match.profile_id + ")");
  return lines;
}

}  // namespace dhub::match
