#pragma once

// Guided challenge articulation: domain-aware question templates whose
// answers compile into a Draft Challenge. Rule-based, no free-text
// understanding.

#include "dhub/model.hpp"
#include "dhub/serialization.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dhub::intake {

enum class AnswerKind { Text, Integer, Money, CountryCode, TagList, Months };

struct QuestionTemplate {
  std::string question_id;
  std::optional<Domain> domain;  // nullopt: asked for every domain
  std::string prompt;
  AnswerKind answer_kind = AnswerKind::Text;
  bool required = false;
  std::optional<std::string> maps_to;  // Challenge field name

  friend bool operator==(const QuestionTemplate&, const QuestionTemplate&) = default;
};

/// Challenge fields that must each be covered by exactly one required template.
std::span<const std::string_view> required_fields();

inline constexpr std::string_view kDraftChallengeId = "chl-draft";

class TemplateSet {
 public:
  /// Validates uniqueness of ids and required-field coverage for every domain.
  /// Throws ErrorCode::Config on a broken set.
  explicit TemplateSet(std::vector<QuestionTemplate> templates);

  /// The set shipped with the project (also written to data/intake_templates.json).
  static TemplateSet builtin();
  /// Reads a JSON array of templates (ErrorCode::Format on malformed files).
  static TemplateSet load(const std::filesystem::path& path);

  /// ALL-domain templates first, then the domain's own, each in file order.
  std::vector<QuestionTemplate> questions_for(Domain domain) const;
  const QuestionTemplate* find(std::string_view question_id) const;
  const std::vector<QuestionTemplate>& all() const { return templates_; }

 private:
  std::vector<QuestionTemplate> templates_;
};

/// Canonical text form of an answer. Idempotent. Throws ErrorCode::Parse.
///   Text        trimmed, non-empty
///   Integer     decimal digits (thousands separators ',' and '_' allowed)
///   Months      as Integer, >= 1
///   Money       Money::parse after removing separators, rendered "123.00"
///   CountryCode two letters, uppercased, must be an assigned ISO code
///   TagList     comma separated, each tag normalized, deduplicated, sorted
std::string normalize_answer(AnswerKind kind, std::string_view raw);

/// Builds a Draft Challenge (id `kDraftChallengeId`) from intake answers.
/// Errors: unknown question or duplicated answer -> Input; missing required
/// answers -> Completeness (details hold the question ids); unparseable
/// answer -> Parse; resulting Challenge invalid -> Validation.
Challenge compile(const TemplateSet& templates, std::string deployer_id, Domain domain,
                  std::span<const IntakeAnswer> answers);

std::string_view to_string(AnswerKind kind);
AnswerKind answer_kind_from_string(std::string_view name);

void to_json(json& j, const QuestionTemplate& t);
void from_json(const json& j, QuestionTemplate& t);

}  // namespace dhub::intake
