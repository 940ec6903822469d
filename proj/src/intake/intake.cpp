#include "dhub/intake.hpp"

#include "dhub/dataset.hpp"
#include "dhub/geo.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <map>
#include <set>

namespace dhub::intake {
namespace {

constexpr std::array<std::string_view, 7> kRequiredFields{
    "title", "domain", "country", "affected_population", "budget_usd", "window_months",
    "required_tags"};

constexpr std::array<std::string_view, 6> kKindNames{"Text",        "Integer", "Money",
                                                     "CountryCode", "TagList", "Months"};

std::string trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::string strip_separators(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != ',' && c != '_') out.push_back(c);
  }
  return out;
}

Error parse_error(AnswerKind kind, std::string_view raw, std::string_view why) {
  return Error(ErrorCode::Parse, "cannot read '" + std::string(raw) + "' as " +
                                     std::string(to_string(kind)) + ": " + std::string(why));
}

std::int64_t parse_integer(AnswerKind kind, std::string_view raw) {
  const std::string digits = strip_separators(trim(raw));
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(),
                                     [](char c) { return c >= '0' && c <= '9'; })) {
    throw parse_error(kind, raw, "expected a whole number");
  }
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc{}) throw parse_error(kind, raw, "number out of range");
  return v;
}

TagSet parse_tags(std::string_view raw) {
  TagSet tags;
  std::size_t start = 0;
  while (start <= raw.size()) {
    const auto comma = raw.find(',', start);
    const auto piece = raw.substr(start, comma == std::string_view::npos ? raw.npos : comma - start);
    if (auto t = normalize_tag(piece); !t.empty()) tags.insert(std::move(t));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return tags;
}

bool field_accepts(std::string_view field, AnswerKind kind) {
  if (field == "title" || field == "domain") return kind == AnswerKind::Text;
  if (field == "country") return kind == AnswerKind::CountryCode;
  if (field == "affected_population") return kind == AnswerKind::Integer;
  if (field == "budget_usd") return kind == AnswerKind::Money;
  if (field == "window_months") return kind == AnswerKind::Months || kind == AnswerKind::Integer;
  if (field == "required_tags") return kind == AnswerKind::TagList;
  return false;
}

QuestionTemplate q(std::string id, std::optional<Domain> domain, std::string prompt,
                   AnswerKind kind, bool required, std::optional<std::string> maps_to = {}) {
  return {std::move(id), domain, std::move(prompt), kind, required, std::move(maps_to)};
}

}  // namespace

std::string_view to_string(AnswerKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

AnswerKind answer_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<AnswerKind>(i);
  }
  throw Error(ErrorCode::Input, "unknown answer kind '" + std::string(name) + "'");
}

std::span<const std::string_view> required_fields() { return kRequiredFields; }

void to_json(json& j, const QuestionTemplate& t) {
  j = json{{"question_id", t.question_id},
           {"domain", t.domain ? std::string(dhub::to_string(*t.domain)) : std::string("ALL")},
           {"prompt", t.prompt},
           {"answer_kind", to_string(t.answer_kind)},
           {"required", t.required},
           {"maps_to", t.maps_to ? json(*t.maps_to) : json(nullptr)}};
}

void from_json(const json& j, QuestionTemplate& t) {
  t.question_id = j.at("question_id").get<std::string>();
  const auto domain = j.at("domain").get<std::string>();
  t.domain = domain == "ALL" ? std::nullopt : std::optional(enum_from_string<Domain>(domain));
  t.prompt = j.at("prompt").get<std::string>();
  t.answer_kind = answer_kind_from_string(j.at("answer_kind").get<std::string>());
  t.required = j.at("required").get<bool>();
  if (auto it = j.find("maps_to"); it != j.end() && !it->is_null()) {
    t.maps_to = it->get<std::string>();
  } else {
    t.maps_to.reset();
  }
}

// ---------------------------------------------------------------------------

TemplateSet::TemplateSet(std::vector<QuestionTemplate> templates) : templates_(std::move(templates)) {
  std::set<std::string> ids;
  for (const auto& t : templates_) {
    if (t.question_id.empty()) throw Error(ErrorCode::Config, "template without question_id");
    if (!ids.insert(t.question_id).second) {
      throw Error(ErrorCode::Config, "duplicate question_id " + t.question_id);
    }
    if (t.maps_to) {
      const bool known = std::find(kRequiredFields.begin(), kRequiredFields.end(), *t.maps_to) !=
                         kRequiredFields.end();
      if (!known) {
        throw Error(ErrorCode::Config,
                    t.question_id + " maps to unknown challenge field " + *t.maps_to);
      }
      if (!field_accepts(*t.maps_to, t.answer_kind)) {
        throw Error(ErrorCode::Config, t.question_id + " answer kind " +
                                           std::string(to_string(t.answer_kind)) +
                                           " cannot fill " + *t.maps_to);
      }
    }
  }
  for (auto domain : all_values<Domain>()) {
    std::map<std::string, int, std::less<>> coverage;
    for (const auto& t : questions_for(domain)) {
      if (t.required && t.maps_to) ++coverage[*t.maps_to];
    }
    for (auto field : kRequiredFields) {
      const auto it = coverage.find(field);
      const int n = it == coverage.end() ? 0 : it->second;
      if (n != 1) {
        throw Error(ErrorCode::Config,
                    "field " + std::string(field) + " must be covered by exactly one required " +
                        "template for " + std::string(dhub::to_string(domain)) + " (found " +
                        std::to_string(n) + ")");
      }
    }
  }
}

TemplateSet TemplateSet::load(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  std::vector<QuestionTemplate> templates;
  try {
    templates = json::parse(text).get<std::vector<QuestionTemplate>>();
  } catch (const std::exception& e) {
    throw Error(ErrorCode::Format, "template file " + path.string() + ": " + e.what());
  }
  return TemplateSet(std::move(templates));
}

std::vector<QuestionTemplate> TemplateSet::questions_for(Domain domain) const {
  std::vector<QuestionTemplate> out;
  for (const auto& t : templates_) {
    if (!t.domain) out.push_back(t);
  }
  for (const auto& t : templates_) {
    if (t.domain == domain) out.push_back(t);
  }
  return out;
}

const QuestionTemplate* TemplateSet::find(std::string_view question_id) const {
  for (const auto& t : templates_) {
    if (t.question_id == question_id) return &t;
  }
  return nullptr;
}

TemplateSet TemplateSet::builtin() {
  using K = AnswerKind;
  const auto A = std::optional<Domain>{};
  const auto Ag = std::optional(Domain::Agriculture);
  const auto Wa = std::optional(Domain::Water);
  const auto En = std::optional(Domain::Energy);
  const auto He = std::optional(Domain::Health);
  const auto Ed = std::optional(Domain::Education);
  return TemplateSet({
      q("core.title", A, "Give the challenge a short, descriptive title.", K::Text, true, "title"),
      q("core.domain", A, "Which domain does the challenge belong to?", K::Text, true, "domain"),
      q("core.country", A, "In which country will the solution be deployed (ISO code, e.g. KE)?",
        K::CountryCode, true, "country"),
      q("core.population", A, "How many people are affected by the challenge?", K::Integer, true,
        "affected_population"),
      q("core.budget", A, "What budget is available, in USD?", K::Money, true, "budget_usd"),
      q("core.window", A, "Within how many months must a solution be operational?", K::Months, true,
        "window_months"),
      q("core.capabilities", A, "Which capabilities must a solution provide (comma separated)?",
        K::TagList, true, "required_tags"),
      q("core.outcomes", A, "What outcomes would show the challenge is solved?", K::Text, false),
      q("core.constraints", A, "Are there constraints providers should know about?", K::Text, false),

      q("agri.practices", Ag,
        "Which practices are involved (e.g. irrigation, soil sensing, cold chain)?", K::TagList,
        false, "required_tags"),
      q("agri.crops", Ag, "Which crops or livestock are affected?", K::Text, false),
      q("agri.season", Ag, "How many months until the next planting season?", K::Months, false),

      q("water.services", Wa,
        "Which water services are needed (e.g. water purification, sanitation, leak detection)?",
        K::TagList, false, "required_tags"),
      q("water.source", Wa, "What is the current water source?", K::Text, false),

      q("energy.services", En,
        "Which energy services are needed (e.g. mini-grids, solar home systems, clean cooking)?",
        K::TagList, false, "required_tags"),
      q("energy.grid", En, "Describe the grid connection at the site.", K::Text, false),

      q("health.services", He,
        "Which health capabilities are needed (e.g. diagnostics, telemedicine, cold chain)?",
        K::TagList, false, "required_tags"),
      q("health.facilities", He, "How many health facilities are involved?", K::Integer, false),

      q("edu.services", Ed,
        "Which education capabilities are needed (e.g. e-learning, teacher training, literacy)?",
        K::TagList, false, "required_tags"),
      q("edu.learners", Ed, "Which learner groups are targeted?", K::Text, false),
  });
}

// ---------------------------------------------------------------------------

std::string normalize_answer(AnswerKind kind, std::string_view raw) {
  switch (kind) {
    case AnswerKind::Text: {
      auto t = trim(raw);
      if (t.empty()) throw parse_error(kind, raw, "answer is empty");
      return t;
    }
    case AnswerKind::Integer: return std::to_string(parse_integer(kind, raw));
    case AnswerKind::Months: {
      const auto v = parse_integer(kind, raw);
      if (v < 1) throw parse_error(kind, raw, "expected at least one month");
      return std::to_string(v);
    }
    case AnswerKind::Money: {
      try {
        return Money::parse(strip_separators(trim(raw))).to_string();
      } catch (const Error&) {
        throw parse_error(kind, raw, "expected an amount such as 250000.00");
      }
    }
    case AnswerKind::CountryCode: {
      std::string code = trim(raw);
      std::transform(code.begin(), code.end(), code.begin(),
                     [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
      if (!geo::is_known_country(code)) {
        throw parse_error(kind, raw, "expected an ISO 3166-1 alpha-2 country code");
      }
      return code;
    }
    case AnswerKind::TagList: {
      const auto tags = parse_tags(raw);
      if (tags.empty()) throw parse_error(kind, raw, "expected at least one tag");
      std::string out;
      for (const auto& t : tags) out += (out.empty() ? "" : ", ") + t;
      return out;
    }
  }
  throw parse_error(kind, raw, "unsupported answer kind");
}

Challenge compile(const TemplateSet& templates, std::string deployer_id, Domain domain,
                  std::span<const IntakeAnswer> answers) {
  const auto asked = templates.questions_for(domain);
  auto lookup = [&](std::string_view id) -> const QuestionTemplate* {
    for (const auto& t : asked) {
      if (t.question_id == id) return &t;
    }
    return nullptr;
  };

  std::map<std::string, std::string, std::less<>> given;
  for (const auto& a : answers) {
    if (!lookup(a.question_id)) {
      throw Error(ErrorCode::Input, "unknown question '" + a.question_id + "' for domain " +
                                        std::string(dhub::to_string(domain)));
    }
    if (!given.emplace(a.question_id, a.answer).second) {
      throw Error(ErrorCode::Input, "question '" + a.question_id + "' answered twice");
    }
  }

  std::vector<std::string> missing;
  for (const auto& t : asked) {
    if (!t.required || given.count(t.question_id)) continue;
    if (t.maps_to == "domain") continue;  // supplied by the domain argument
    missing.push_back(t.question_id);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw Error(ErrorCode::Completeness, "missing required answers: " + list, missing);
  }

  Challenge c;
  c.id = std::string(kDraftChallengeId);
  c.deployer_id = std::move(deployer_id);
  c.domain = domain;
  c.status = ChallengeStatus::Draft;
  for (const auto& t : asked) {
    const auto it = given.find(t.question_id);
    if (it == given.end()) continue;
    std::string value;
    try {
      value = normalize_answer(t.answer_kind, it->second);
    } catch (const Error& e) {
      throw Error(ErrorCode::Parse, t.question_id + ": " + e.what(), {t.question_id});
    }
    if (!t.maps_to) continue;
    const auto& field = *t.maps_to;
    if (field == "title") {
      c.title = value;
    } else if (field == "domain") {
      if (normalize_tag(value) != domain_tag(domain)) {
        throw Error(ErrorCode::Input, t.question_id + ": answer '" + value +
                                          "' disagrees with domain " +
                                          std::string(dhub::to_string(domain)));
      }
    } else if (field == "country") {
      c.country = value;
    } else if (field == "affected_population") {
      c.affected_population = std::stoll(value);
    } else if (field == "budget_usd") {
      c.budget_usd = Money::parse(value);
    } else if (field == "window_months") {
      c.window_months = std::stoi(value);
    } else if (field == "required_tags") {
      const auto tags = parse_tags(value);
      c.required_tags.insert(tags.begin(), tags.end());
    }
  }
  c.intake_answers.assign(answers.begin(), answers.end());

  if (auto r = validate_entity(c); !r.ok()) {
    throw Error(ErrorCode::Validation, "compiled challenge is invalid: " + r.violations.front(),
                r.violations);
  }
  return c;
}

}  // namespace dhub::intake
