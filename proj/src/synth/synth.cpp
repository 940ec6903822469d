#include "dhub/synth.hpp"

#include "dhub/geo.hpp"
#include "dhub/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>

// Draw order (defines the output for a given seed, do not reorder):
//   1. shuffle of the role list built from quota_split(n_orgs, roles)
//   2. shuffle of the round-robin country list
//   3. per organization: domain count, domain sample, verified, scale tier,
//      created_at offset, three name parts
//   4. shuffle of the challenge domain list from quota_split(n_challenges)
//   5. per challenge: deployer pick, tag count, tag sample, population,
//      budget, window
//   6. shuffle of the solution domain list from quota_split(n_solutions)
//   7. per solution: provider pick, tag count, tag sample, global coverage
//      flag, extra coverage countries, cost, lead time, capacity, completed,
//      successful (binomial), title part

namespace dhub::synth {
namespace {

constexpr std::array<std::string_view, 8> kAgriculture{
    "irrigation",   "solar pumps",     "soil sensing",      "cold chain",
    "seed systems", "crop insurance",  "precision farming", "post-harvest storage"};
constexpr std::array<std::string_view, 8> kWater{
    "water purification", "desalination",        "borehole drilling",        "leak detection",
    "sanitation",         "rainwater harvesting", "water quality monitoring", "wastewater treatment"};
constexpr std::array<std::string_view, 8> kEnergy{
    "solar home systems", "mini-grids",    "battery storage",   "clean cooking",
    "grid analytics",     "wind power",    "energy efficiency", "pay-as-you-go"};
constexpr std::array<std::string_view, 8> kHealth{
    "telemedicine",    "diagnostics",  "cold chain",                "maternal health",
    "health records",  "supply chain", "community health workers", "disease surveillance"};
constexpr std::array<std::string_view, 8> kEducation{
    "e-learning", "teacher training",    "offline content",    "literacy",
    "stem kits",  "school connectivity", "learning analytics", "vocational training"};

constexpr std::array<std::string_view, 16> kNameStems{
    "Amani", "Baraka", "Horizon", "Meridian", "Sahel",  "Andes",  "Delta",  "Lumen",
    "Kijani", "Nova",  "Pioneer", "Riverbend", "Summit", "Tamarind", "Unity", "Verdant"};
constexpr std::array<std::string_view, 8> kNameCores{
    "Community", "Rural", "Green", "Open", "Bright", "Common", "Frontier", "Harvest"};
constexpr std::array<std::string_view, 6> kDeployerSuffix{
    "District Council", "Cooperative", "Health Authority", "Water Board", "Municipality",
    "Education Office"};
constexpr std::array<std::string_view, 6> kProviderSuffix{
    "Technologies", "Labs", "Solutions", "Systems", "Engineering", "Innovations"};
constexpr std::array<std::string_view, 6> kFinancierSuffix{
    "Fund", "Capital", "Foundation", "Development Bank", "Impact Partners", "Trust"};
constexpr std::array<std::string_view, 6> kSolutionKinds{
    "Kit", "Platform", "Service", "Network", "Programme", "Toolkit"};

constexpr double kVerifiedProbability = 0.6;
constexpr double kSuccessProbability = 0.75;
constexpr double kGlobalCoverageProbability = 0.15;
constexpr std::int64_t kYearSeconds = 365LL * 24 * 3600;

// 2024-01-01T00:00:00Z
const Timestamp kEpoch = Timestamp{std::chrono::sys_days{std::chrono::year{2024} / 1 / 1}};

std::string numbered(std::string_view prefix, int n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*s-%06d", static_cast<int>(prefix.size()), prefix.data(), n);
  return buf;
}

template <class Array>
std::string_view pick(Rng& rng, const Array& items) {
  return items[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(items.size()) - 1))];
}

std::vector<std::string> vocabulary_of(Domain d) {
  const auto v = capability_vocabulary(d);
  return {v.begin(), v.end()};
}

std::vector<Domain> expand_domains(int n) {
  const auto counts = quota_split(n, domain_shares());
  std::vector<Domain> out;
  for (const auto& [label, count] : counts) {
    out.insert(out.end(), static_cast<std::size_t>(count), enum_from_string<Domain>(label));
  }
  return out;
}

/// Organizations of `role` working in `domain`; all of `role` if none do.
std::vector<std::size_t> eligible(const std::vector<Organization>& orgs, OrgRole role,
                                  Domain domain) {
  std::vector<std::size_t> matching, any;
  for (std::size_t i = 0; i < orgs.size(); ++i) {
    if (orgs[i].role != role) continue;
    any.push_back(i);
    if (orgs[i].domains.count(domain)) matching.push_back(i);
  }
  return matching.empty() ? any : matching;
}

std::string capitalized(std::string_view tag) {
  std::string out(tag);
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

json describe_config(const GenConfig& config) {
  json pool = json::array();
  for (auto c : geo::country_pool()) pool.push_back(c);
  return json{
      {"generator", "dhub-synth"},
      {"generator_version", kGeneratorVersion},
      {"prng", "mt19937_64"},
      {"seed", config.seed},
      {"config",
       {{"n_orgs", config.n_orgs},
        {"n_challenges", config.n_challenges},
        {"n_solutions", config.n_solutions},
        {"country_pool_size", kCountryPoolSize}}},
      {"country_pool", pool},
      {"distributions",
       {{"roles", "largest-remainder quota: Deployer 35%, Provider 38%, Financier 27%"},
        {"domains",
         "largest-remainder quota per challenges and per solutions: Agriculture 30%, Water 20%, "
         "Energy 20%, Health 15%, Education 15%"},
        {"countries", "round-robin over the 45-country pool, then shuffled"},
        {"organization_domains", "1-3 distinct domains, uniform"},
        {"verified", "Bernoulli(0.6)"},
        {"challenge_country", "country of the owning deployer"},
        {"budget_usd", "log-uniform [1e4, 1e7], rounded to cents"},
        {"cost_usd", "log-uniform [1e4, 5e6], rounded to cents"},
        {"window_months", "uniform integer [3, 36]"},
        {"lead_time_months", "uniform integer [1, 24]"},
        {"affected_population", "log-uniform integer [1e3, 5e6]"},
        {"capacity_population", "log-uniform integer [1e3, 5e6]"},
        {"coverage", "GLOBAL with p=0.15, else provider country plus 0-3 pool countries"},
        {"deployments_completed", "uniform integer [0, 12]"},
        {"deployments_successful", "Binomial(completed, 0.75)"}}}};
}

}  // namespace

std::vector<std::pair<std::string, int>> quota_split(int n, std::span<const Share> shares) {
  if (n < 0) throw Error(ErrorCode::Input, "quota_split needs n >= 0");
  int percent_sum = 0;
  for (const auto& s : shares) {
    if (s.percent < 0) throw Error(ErrorCode::Input, "share '" + s.label + "' is negative");
    percent_sum += s.percent;
  }
  if (percent_sum != 100) {
    throw Error(ErrorCode::Input,
                "shares must sum to 100 (got " + std::to_string(percent_sum) + ")");
  }
  std::vector<std::pair<std::string, int>> out;
  std::vector<int> remainder;  // in hundredths of a unit, exact
  int assigned = 0;
  for (const auto& s : shares) {
    const long long scaled = static_cast<long long>(n) * s.percent;
    out.emplace_back(s.label, static_cast<int>(scaled / 100));
    remainder.push_back(static_cast<int>(scaled % 100));
    assigned += out.back().second;
  }
  std::vector<std::size_t> order(shares.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++out[order[i]].second;
  return out;
}

std::vector<Share> role_shares() {
  return {{"Deployer", 35}, {"Provider", 38}, {"Financier", 27}};
}

std::vector<Share> domain_shares() {
  return {{"Agriculture", 30}, {"Water", 20}, {"Energy", 20}, {"Health", 15}, {"Education", 15}};
}

std::span<const std::string_view> capability_vocabulary(Domain domain) {
  switch (domain) {
    case Domain::Agriculture: return kAgriculture;
    case Domain::Water: return kWater;
    case Domain::Energy: return kEnergy;
    case Domain::Health: return kHealth;
    case Domain::Education: return kEducation;
  }
  return {};
}

Dataset generate(const GenConfig& config) {
  if (config.n_orgs < 3) {
    throw Error(ErrorCode::Config,
                "n_orgs must be >= 3 so every role can be populated (got " +
                    std::to_string(config.n_orgs) + ")");
  }
  if (config.n_challenges < 0 || config.n_solutions < 0) {
    throw Error(ErrorCode::Config, "challenge and solution counts must be >= 0");
  }
  const auto role_counts = quota_split(config.n_orgs, role_shares());
  auto count_of = [&](OrgRole role) {
    for (const auto& [label, n] : role_counts) {
      if (label == to_string(role)) return n;
    }
    return 0;
  };
  if (config.n_challenges > 0 && count_of(OrgRole::Deployer) == 0) {
    throw Error(ErrorCode::Config, "challenges requested but no deployer would be generated");
  }
  if (config.n_solutions > 0 && count_of(OrgRole::Provider) == 0) {
    throw Error(ErrorCode::Config, "solutions requested but no provider would be generated");
  }

  Rng rng(config.seed);
  Dataset data;
  data.meta = describe_config(config);

  // Organizations
  std::vector<OrgRole> roles;
  for (const auto& [label, n] : role_counts) {
    roles.insert(roles.end(), static_cast<std::size_t>(n), enum_from_string<OrgRole>(label));
  }
  rng.shuffle(roles);

  const auto pool = geo::country_pool();
  std::vector<std::string_view> countries;
  for (int i = 0; i < config.n_orgs; ++i) countries.push_back(pool[static_cast<std::size_t>(i) % pool.size()]);
  rng.shuffle(countries);

  const auto all_domains = all_values<Domain>();
  const std::vector<Domain> domain_list(all_domains.begin(), all_domains.end());
  for (int i = 0; i < config.n_orgs; ++i) {
    Organization o;
    o.id = numbered("org", i + 1);
    o.role = roles[static_cast<std::size_t>(i)];
    o.country = std::string(countries[static_cast<std::size_t>(i)]);
    o.region = geo::region_of(o.country);
    const auto n_domains = static_cast<std::size_t>(rng.uniform_int(1, 3));
    for (auto d : rng.sample(domain_list, n_domains)) o.domains.insert(d);
    o.verified = rng.bernoulli(kVerifiedProbability);
    o.scale_tier = static_cast<ScaleTier>(rng.uniform_int(0, 3));
    o.created_at = kEpoch + std::chrono::seconds{rng.uniform_int(0, kYearSeconds - 1)};
    const auto stem = pick(rng, kNameStems);
    const auto core = pick(rng, kNameCores);
    std::string_view suffix;
    switch (o.role) {
      case OrgRole::Deployer: suffix = pick(rng, kDeployerSuffix); break;
      case OrgRole::Provider: suffix = pick(rng, kProviderSuffix); break;
      case OrgRole::Financier: suffix = pick(rng, kFinancierSuffix); break;
    }
    o.name = std::string(stem) + " " + std::string(core) + " " + std::string(suffix);
    data.organizations.push_back(std::move(o));
  }

  // Challenges
  auto challenge_domains = expand_domains(config.n_challenges);
  rng.shuffle(challenge_domains);
  for (int i = 0; i < config.n_challenges; ++i) {
    Challenge c;
    c.id = numbered("chl", i + 1);
    c.domain = challenge_domains[static_cast<std::size_t>(i)];
    const auto deployers = eligible(data.organizations, OrgRole::Deployer, c.domain);
    const auto& deployer = data.organizations[deployers[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(deployers.size()) - 1))]];
    c.deployer_id = deployer.id;
    c.country = deployer.country;
    const auto n_tags = static_cast<std::size_t>(rng.uniform_int(2, 4));
    std::vector<std::string> tags = rng.sample(vocabulary_of(c.domain), n_tags);
    c.required_tags = TagSet(tags.begin(), tags.end());
    c.affected_population =
        static_cast<std::int64_t>(std::llround(rng.log_uniform(1e3, 5e6)));
    c.budget_usd = Money::from_usd(rng.log_uniform(1e4, 1e7));
    c.window_months = static_cast<int>(rng.uniform_int(3, 36));
    c.status = ChallengeStatus::Open;
    c.title = std::string(to_string(c.domain)) + " need in " + c.country + ": " + tags.front();
    for (std::size_t t = 1; t < tags.size(); ++t) c.title += ", " + tags[t];
    data.challenges.push_back(std::move(c));
  }

  // Solutions
  auto solution_domains = expand_domains(config.n_solutions);
  rng.shuffle(solution_domains);
  const std::vector<std::string_view> pool_list(pool.begin(), pool.end());
  for (int i = 0; i < config.n_solutions; ++i) {
    Solution s;
    s.id = numbered("sol", i + 1);
    s.domain = solution_domains[static_cast<std::size_t>(i)];
    const auto providers = eligible(data.organizations, OrgRole::Provider, s.domain);
    const auto& provider = data.organizations[providers[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(providers.size()) - 1))]];
    s.provider_id = provider.id;
    const auto n_tags = static_cast<std::size_t>(rng.uniform_int(2, 5));
    std::vector<std::string> tags = rng.sample(vocabulary_of(s.domain), n_tags);
    s.tags = TagSet(tags.begin(), tags.end());
    if (rng.bernoulli(kGlobalCoverageProbability)) {
      s.coverage = Coverage::everywhere();
    } else {
      s.coverage.countries.insert(provider.country);
      const auto extra = static_cast<std::size_t>(rng.uniform_int(0, 3));
      for (auto c : rng.sample(pool_list, extra)) s.coverage.countries.insert(std::string(c));
    }
    s.cost_usd = Money::from_usd(rng.log_uniform(1e4, 5e6));
    s.lead_time_months = static_cast<int>(rng.uniform_int(1, 24));
    s.capacity_population = static_cast<std::int64_t>(std::llround(rng.log_uniform(1e3, 5e6)));
    s.deployments_completed = static_cast<int>(rng.uniform_int(0, 12));
    s.deployments_successful = rng.binomial(s.deployments_completed, kSuccessProbability);
    s.title = capitalized(tags.front()) + " " + std::string(pick(rng, kSolutionKinds));
    data.solutions.push_back(std::move(s));
  }
  return data;
}

}  // namespace dhub::synth
