#include "dhub/model.hpp"

#include "dhub/geo.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace dhub {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Input: return "input_error";
    case ErrorCode::NotFound: return "not_found";
    case ErrorCode::Integrity: return "integrity_error";
    case ErrorCode::Validation: return "validation_error";
    case ErrorCode::State: return "state_error";
    case ErrorCode::Format: return "format_error";
    case ErrorCode::Config: return "config_error";
    case ErrorCode::Completeness: return "completeness_error";
    case ErrorCode::Parse: return "parse_error";
  }
  return "error";
}

std::string domain_tag(Domain d) { return normalize_tag(to_string(d)); }

// ---------------------------------------------------------------------------
// Money

Money Money::from_usd(double usd) {
  return Money(static_cast<std::int64_t>(std::llround(usd * 100.0)));
}

Money Money::parse(std::string_view text) {
  auto fail = [&] {
    return Error(ErrorCode::Input, "malformed money amount '" + std::string(text) + "'");
  };
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && s.front() == '-') {
    negative = true;
    s.remove_prefix(1);
  }
  const auto dot = s.find('.');
  std::string_view whole = s.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (whole.empty() || (dot != std::string_view::npos && (frac.empty() || frac.size() > 2))) {
    throw fail();
  }
  auto all_digits = [](std::string_view v) {
    return std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (!all_digits(whole) || !all_digits(frac)) throw fail();

  std::int64_t units = 0;
  auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), units);
  if (ec != std::errc{} || units > std::numeric_limits<std::int64_t>::max() / 100 - 1) throw fail();
  std::int64_t cents = 0;
  if (!frac.empty()) {
    cents = (frac[0] - '0') * 10 + (frac.size() > 1 ? frac[1] - '0' : 0);
  }
  const std::int64_t total = units * 100 + cents;
  return Money(negative ? -total : total);
}

std::string Money::to_string() const {
  const std::int64_t magnitude = cents_ < 0 ? -cents_ : cents_;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%lld.%02lld", cents_ < 0 ? "-" : "",
                static_cast<long long>(magnitude / 100), static_cast<long long>(magnitude % 100));
  return buf;
}

// ---------------------------------------------------------------------------
// Time

namespace {

bool parse_fixed_int(std::string_view s, int& out) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return false;
  }
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{};
}

Date parse_date_or_throw(std::string_view text, std::string_view what) {
  int y = 0, m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
      !parse_fixed_int(text.substr(0, 4), y) || !parse_fixed_int(text.substr(5, 2), m) ||
      !parse_fixed_int(text.substr(8, 2), d)) {
    throw Error(ErrorCode::Input, "malformed " + std::string(what) + " '" + std::string(text) + "'");
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) {
    throw Error(ErrorCode::Input, "invalid calendar date '" + std::string(text) + "'");
  }
  return Date{ymd};
}

}  // namespace

std::string format_date(Date d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                unsigned(ymd.day()));
  return buf;
}

Date parse_date(std::string_view text) { return parse_date_or_throw(text, "date"); }

std::string format_timestamp(Timestamp t) {
  const auto day = std::chrono::floor<std::chrono::days>(t);
  const std::chrono::hh_mm_ss hms{t - day};
  char buf[16];
  std::snprintf(buf, sizeof buf, "T%02d:%02d:%02dZ", int(hms.hours().count()),
                int(hms.minutes().count()), int(hms.seconds().count()));
  return format_date(day) + buf;
}

Timestamp parse_timestamp(std::string_view text) {
  auto fail = [&] {
    return Error(ErrorCode::Input, "malformed timestamp '" + std::string(text) + "'");
  };
  if (text.size() != 20 || text[10] != 'T' || text[13] != ':' || text[16] != ':' ||
      text[19] != 'Z') {
    throw fail();
  }
  const Date day = parse_date_or_throw(text.substr(0, 10), "timestamp");
  int h = 0, m = 0, s = 0;
  if (!parse_fixed_int(text.substr(11, 2), h) || !parse_fixed_int(text.substr(14, 2), m) ||
      !parse_fixed_int(text.substr(17, 2), s) || h > 23 || m > 59 || s > 59) {
    throw fail();
  }
  return Timestamp{day} + std::chrono::hours{h} + std::chrono::minutes{m} +
         std::chrono::seconds{s};
}

Timestamp default_now() {
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    long long secs = 0;
    const std::string_view v{epoch};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), secs);
    if (ec == std::errc{} && p == v.data() + v.size()) return Timestamp{std::chrono::seconds{secs}};
  }
  return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

Clock default_clock() { return [] { return default_now(); }; }

// ---------------------------------------------------------------------------
// Tags, coverage, profiles

std::string normalize_tag(std::string_view raw) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!raw.empty() && is_space(raw.front())) raw.remove_prefix(1);
  while (!raw.empty() && is_space(raw.back())) raw.remove_suffix(1);
  std::string out(raw);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

TagSet normalize_tags(const TagSet& raw) {
  TagSet out;
  for (const auto& t : raw) {
    if (auto n = normalize_tag(t); !n.empty()) out.insert(std::move(n));
  }
  return out;
}

bool Coverage::includes(std::string_view country) const {
  return countries.find(std::string(country)) != countries.end();
}

WeightProfile default_profile() {
  return WeightProfile{std::string(kDefaultProfileId), {0.20, 0.15, 0.20, 0.25, 0.15, 0.05}};
}

std::string match_id_for(std::string_view challenge_id, std::string_view solution_id,
                         std::string_view profile_id) {
  std::string id = "mat-";
  id.append(challenge_id).append("-").append(solution_id).append("-").append(profile_id);
  return id;
}

bool is_legal_transition(DeploymentStatus from, DeploymentStatus to) {
  using S = DeploymentStatus;
  switch (from) {
    case S::Proposed: return to == S::Active || to == S::Cancelled;
    case S::Active: return to == S::Completed || to == S::Cancelled;
    case S::Completed:
    case S::Cancelled: return false;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class Violations {
 public:
  void require(bool cond, std::string message) {
    if (!cond) result_.violations.push_back(std::move(message));
  }
  ValidationResult take() { return std::move(result_); }

 private:
  ValidationResult result_;
};

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

void check_country(Violations& v, std::string_view field, const std::string& code) {
  v.require(geo::is_known_country(code),
            std::string(field) + " must be an ISO 3166-1 alpha-2 code (got '" + code + "')");
}

void check_tags(Violations& v, std::string_view field, const TagSet& tags) {
  v.require(!tags.empty(), std::string(field) + " must be non-empty");
  for (const auto& t : tags) {
    v.require(!t.empty() && normalize_tag(t) == t,
              std::string(field) + " entry '" + t + "' must be trimmed lowercase and non-empty");
  }
}

bool in_unit(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

ValidationResult validate_entity(const Organization& org) {
  Violations v;
  v.require(!org.id.empty(), "id must be non-empty");
  v.require(!blank(org.name), "name must be non-empty");
  check_country(v, "country", org.country);
  if (geo::is_alpha2_shape(org.country)) {
    const auto expected = geo::region_of(org.country);
    v.require(org.region == expected,
              "region must equal region_of(country) = '" + expected + "' (got '" + org.region + "')");
  }
  v.require(!org.domains.empty(), "domains must be non-empty");
  return v.take();
}

ValidationResult validate_entity(const Challenge& c) {
  Violations v;
  v.require(!c.id.empty(), "id must be non-empty");
  v.require(!c.deployer_id.empty(), "deployer_id must be non-empty");
  v.require(!blank(c.title), "title must be non-empty");
  check_country(v, "country", c.country);
  check_tags(v, "required_tags", c.required_tags);
  v.require(c.affected_population >= 1,
            "affected_population must be >= 1 (got " + std::to_string(c.affected_population) + ")");
  v.require(c.budget_usd > Money{}, "budget_usd must be > 0 (got " + c.budget_usd.to_string() + ")");
  v.require(c.window_months >= 1,
            "window_months must be >= 1 (got " + std::to_string(c.window_months) + ")");
  for (const auto& a : c.intake_answers) {
    v.require(!a.question_id.empty(), "intake_answers entries need a question_id");
  }
  return v.take();
}

ValidationResult validate_entity(const Solution& s) {
  Violations v;
  v.require(!s.id.empty(), "id must be non-empty");
  v.require(!s.provider_id.empty(), "provider_id must be non-empty");
  v.require(!blank(s.title), "title must be non-empty");
  check_tags(v, "tags", s.tags);
  if (s.coverage.global) {
    v.require(s.coverage.countries.empty(), "GLOBAL coverage must not list countries");
  } else {
    v.require(!s.coverage.countries.empty(), "coverage must be GLOBAL or a non-empty country set");
    for (const auto& c : s.coverage.countries) check_country(v, "coverage", c);
  }
  v.require(s.cost_usd > Money{}, "cost_usd must be > 0 (got " + s.cost_usd.to_string() + ")");
  v.require(s.lead_time_months >= 1,
            "lead_time_months must be >= 1 (got " + std::to_string(s.lead_time_months) + ")");
  v.require(s.capacity_population >= 1,
            "capacity_population must be >= 1 (got " + std::to_string(s.capacity_population) + ")");
  v.require(s.deployments_completed >= 0, "deployments_completed must be >= 0");
  v.require(s.deployments_successful >= 0, "deployments_successful must be >= 0");
  v.require(s.deployments_successful <= s.deployments_completed,
            "deployments_successful must be <= deployments_completed (" +
                std::to_string(s.deployments_successful) + " > " +
                std::to_string(s.deployments_completed) + ")");
  return v.take();
}

ValidationResult validate_entity(const WeightProfile& p) {
  Violations v;
  v.require(!p.id.empty(), "id must be non-empty");
  double sum = 0.0;
  for (auto d : all_values<Dimension>()) {
    const double w = p.weight(d);
    v.require(in_unit(w), "weight " + std::string(to_string(d)) + " must lie in [0, 1]");
    sum += w;
  }
  v.require(std::abs(sum - 1.0) <= kWeightSumTolerance, "weights must sum to 1");
  return v.take();
}

ValidationResult validate_entity(const MatchResult& m) {
  Violations v;
  v.require(!m.id.empty(), "id must be non-empty");
  v.require(!m.challenge_id.empty(), "challenge_id must be non-empty");
  v.require(!m.solution_id.empty(), "solution_id must be non-empty");
  v.require(!m.profile_id.empty(), "profile_id must be non-empty");
  v.require(m.breakdown.size() == kDimensionCount, "breakdown must hold exactly 6 dimension scores");
  double sum = 0.0;
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < m.breakdown.size(); ++i) {
    const auto& s = m.breakdown[i];
    const auto name = std::string(to_string(s.dimension));
    v.require(i >= kDimensionCount || s.dimension == static_cast<Dimension>(i),
              "breakdown entry " + std::to_string(i) + " is out of order (" + name + ")");
    v.require(in_unit(s.raw), name + " raw score must lie in [0, 1]");
    v.require(in_unit(s.weight), name + " weight must lie in [0, 1]");
    v.require(std::abs(s.contribution - 100.0 * s.raw * s.weight) <= 1e-9,
              name + " contribution must equal 100 * raw * weight");
    sum += s.contribution;
    weight_sum += s.weight;
  }
  if (m.breakdown.size() == kDimensionCount) {
    v.require(std::abs(weight_sum - 1.0) <= kWeightSumTolerance, "breakdown weights must sum to 1");
  }
  v.require(std::isfinite(m.total) && m.total >= 0.0 && m.total <= 100.0,
            "total must lie in [0, 100]");
  v.require(std::abs(m.total - sum) <= kTotalTolerance, "total must equal the sum of contributions");
  return v.take();
}

ValidationResult validate_entity(const Deployment& d) {
  Violations v;
  v.require(!d.id.empty(), "id must be non-empty");
  v.require(!d.match_id.empty(), "match_id must be non-empty");
  v.require(!d.financier_id || !d.financier_id->empty(), "financier_id, when present, is non-empty");
  v.require(d.committed_usd >= Money{}, "committed_usd must be >= 0");
  std::set<std::string> names;
  for (const auto& m : d.milestones) {
    v.require(!blank(m.name), "milestone name must be non-empty");
    v.require(names.insert(m.name).second, "milestone name '" + m.name + "' is duplicated");
  }
  return v.take();
}

}  // namespace dhub
