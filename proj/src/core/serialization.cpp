#include "dhub/serialization.hpp"

namespace dhub {
namespace {

Money money_field(const json& j, const char* key) {
  return Money::parse(j.at(key).get<std::string>());
}

Timestamp time_field(const json& j, const char* key) {
  return parse_timestamp(j.at(key).get<std::string>());
}

}  // namespace

void to_json(json& j, const Organization& v) {
  json domains = json::array();
  for (auto d : v.domains) domains.push_back(to_string(d));
  j = json{{"id", v.id},
           {"name", v.name},
           {"role", to_string(v.role)},
           {"country", v.country},
           {"region", v.region},
           {"domains", std::move(domains)},
           {"verified", v.verified},
           {"scale_tier", to_string(v.scale_tier)},
           {"created_at", format_timestamp(v.created_at)}};
}

void from_json(const json& j, Organization& v) {
  v.id = j.at("id").get<std::string>();
  v.name = j.at("name").get<std::string>();
  v.role = enum_field<OrgRole>(j, "role");
  v.country = j.at("country").get<std::string>();
  v.region = j.at("region").get<std::string>();
  v.domains.clear();
  for (const auto& d : j.at("domains")) v.domains.insert(enum_from_string<Domain>(d.get<std::string>()));
  v.verified = j.at("verified").get<bool>();
  v.scale_tier = enum_field<ScaleTier>(j, "scale_tier");
  v.created_at = time_field(j, "created_at");
}

void to_json(json& j, const IntakeAnswer& v) {
  j = json{{"question_id", v.question_id}, {"answer", v.answer}};
}

void from_json(const json& j, IntakeAnswer& v) {
  v.question_id = j.at("question_id").get<std::string>();
  v.answer = j.at("answer").get<std::string>();
}

void to_json(json& j, const Challenge& v) {
  j = json{{"id", v.id},
           {"deployer_id", v.deployer_id},
           {"title", v.title},
           {"domain", to_string(v.domain)},
           {"country", v.country},
           {"required_tags", v.required_tags},
           {"affected_population", v.affected_population},
           {"budget_usd", v.budget_usd.to_string()},
           {"window_months", v.window_months},
           {"status", to_string(v.status)},
           {"intake_answers", v.intake_answers}};
}

void from_json(const json& j, Challenge& v) {
  v.id = j.at("id").get<std::string>();
  v.deployer_id = j.at("deployer_id").get<std::string>();
  v.title = j.at("title").get<std::string>();
  v.domain = enum_field<Domain>(j, "domain");
  v.country = j.at("country").get<std::string>();
  v.required_tags = normalize_tags(j.at("required_tags").get<TagSet>());
  v.affected_population = j.at("affected_population").get<std::int64_t>();
  v.budget_usd = money_field(j, "budget_usd");
  v.window_months = j.at("window_months").get<int>();
  v.status = enum_field<ChallengeStatus>(j, "status");
  v.intake_answers = j.value("intake_answers", json::array()).get<std::vector<IntakeAnswer>>();
}

void to_json(json& j, const Coverage& v) {
  if (v.global) {
    j = "GLOBAL";
  } else {
    j = v.countries;
  }
}

void from_json(const json& j, Coverage& v) {
  if (j.is_string()) {
    if (j.get<std::string>() != "GLOBAL") {
      throw Error(ErrorCode::Input, "coverage must be \"GLOBAL\" or an array of country codes");
    }
    v = Coverage::everywhere();
    return;
  }
  v.global = false;
  v.countries = j.get<std::set<std::string>>();
}

void to_json(json& j, const Solution& v) {
  j = json{{"id", v.id},
           {"provider_id", v.provider_id},
           {"title", v.title},
           {"domain", to_string(v.domain)},
           {"tags", v.tags},
           {"coverage", v.coverage},
           {"cost_usd", v.cost_usd.to_string()},
           {"lead_time_months", v.lead_time_months},
           {"capacity_population", v.capacity_population},
           {"deployments_completed", v.deployments_completed},
           {"deployments_successful", v.deployments_successful}};
}

void from_json(const json& j, Solution& v) {
  v.id = j.at("id").get<std::string>();
  v.provider_id = j.at("provider_id").get<std::string>();
  v.title = j.at("title").get<std::string>();
  v.domain = enum_field<Domain>(j, "domain");
  v.tags = normalize_tags(j.at("tags").get<TagSet>());
  v.coverage = j.at("coverage").get<Coverage>();
  v.cost_usd = money_field(j, "cost_usd");
  v.lead_time_months = j.at("lead_time_months").get<int>();
  v.capacity_population = j.at("capacity_population").get<std::int64_t>();
  v.deployments_completed = j.at("deployments_completed").get<int>();
  v.deployments_successful = j.at("deployments_successful").get<int>();
}

void to_json(json& j, const WeightProfile& v) {
  json weights = json::object();
  for (auto d : all_values<Dimension>()) weights[std::string(to_string(d))] = v.weight(d);
  j = json{{"id", v.id}, {"weights", std::move(weights)}};
}

void from_json(const json& j, WeightProfile& v) {
  v.id = j.at("id").get<std::string>();
  const auto& w = j.at("weights");
  for (auto d : all_values<Dimension>()) {
    v.weights[index_of(d)] = w.at(std::string(to_string(d))).get<double>();
  }
}

void to_json(json& j, const DimensionScore& v) {
  j = json{{"dimension", to_string(v.dimension)},
           {"raw", v.raw},
           {"weight", v.weight},
           {"contribution", v.contribution},
           {"reason", v.reason}};
}

void from_json(const json& j, DimensionScore& v) {
  v.dimension = enum_field<Dimension>(j, "dimension");
  v.raw = j.at("raw").get<double>();
  v.weight = j.at("weight").get<double>();
  v.contribution = j.at("contribution").get<double>();
  v.reason = j.at("reason").get<std::string>();
}

void to_json(json& j, const MatchResult& v) {
  j = json{{"id", v.id},
           {"challenge_id", v.challenge_id},
           {"solution_id", v.solution_id},
           {"profile_id", v.profile_id},
           {"breakdown", v.breakdown},
           {"total", v.total},
           {"computed_at", format_timestamp(v.computed_at)}};
}

void from_json(const json& j, MatchResult& v) {
  v.id = j.at("id").get<std::string>();
  v.challenge_id = j.at("challenge_id").get<std::string>();
  v.solution_id = j.at("solution_id").get<std::string>();
  v.profile_id = j.at("profile_id").get<std::string>();
  v.breakdown = j.at("breakdown").get<std::vector<DimensionScore>>();
  v.total = j.at("total").get<double>();
  v.computed_at = time_field(j, "computed_at");
}

void to_json(json& j, const Milestone& v) {
  j = json{{"name", v.name}, {"due", format_date(v.due)}, {"status", to_string(v.status)}};
}

void from_json(const json& j, Milestone& v) {
  v.name = j.at("name").get<std::string>();
  v.due = parse_date(j.at("due").get<std::string>());
  v.status = enum_field<MilestoneStatus>(j, "status");
}

void to_json(json& j, const Deployment& v) {
  j = json{{"id", v.id},
           {"match_id", v.match_id},
           {"financier_id", v.financier_id ? json(*v.financier_id) : json(nullptr)},
           {"committed_usd", v.committed_usd.to_string()},
           {"milestones", v.milestones},
           {"status", to_string(v.status)},
           {"created_at", format_timestamp(v.created_at)}};
}

void from_json(const json& j, Deployment& v) {
  v.id = j.at("id").get<std::string>();
  v.match_id = j.at("match_id").get<std::string>();
  if (auto it = j.find("financier_id"); it != j.end() && !it->is_null()) {
    v.financier_id = it->get<std::string>();
  } else {
    v.financier_id.reset();
  }
  v.committed_usd = money_field(j, "committed_usd");
  v.milestones = j.at("milestones").get<std::vector<Milestone>>();
  v.status = enum_field<DeploymentStatus>(j, "status");
  v.created_at = time_field(j, "created_at");
}

}  // namespace dhub
