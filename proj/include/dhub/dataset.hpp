#pragma once

// Dataset files: one JSON object with "meta" plus one array per entity kind,
// each sorted by id, newline-terminated. Generator exports carry the
// organizations/challenges/solutions sections; store snapshots add
// "profiles", "matches" and "deployments".

#include "dhub/model.hpp"
#include "dhub/serialization.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dhub {

struct Dataset {
  json meta = json::object();
  std::vector<Organization> organizations;
  std::vector<Challenge> challenges;
  std::vector<Solution> solutions;
  std::vector<WeightProfile> profiles;
  std::vector<MatchResult> matches;
  std::vector<Deployment> deployments;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

enum class DatasetSections { Generated, Snapshot };

/// Canonical text. Sections are sorted by id before writing.
std::string dataset_to_text(Dataset dataset, DatasetSections sections);

/// Structural parse only (types, enums, money, timestamps). Failures raise
/// ErrorCode::Format with the offending line number in the message.
/// Missing snapshot sections read as empty.
Dataset dataset_from_text(std::string_view text);

/// Every entity invariant violation plus every unresolved reference, each
/// prefixed with the entity id. Empty means the dataset is consistent.
std::vector<std::string> check_dataset(const Dataset& dataset);

/// Writes atomically (temp file + rename).
void export_dataset(const Dataset& dataset, const std::filesystem::path& path,
                    DatasetSections sections = DatasetSections::Generated);

/// Parses and checks: an unresolved reference or invalid entity is a
/// ErrorCode::Format error ("unresolved reference ...").
Dataset import_dataset(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file_atomic(const std::filesystem::path& path, std::string_view text);

}  // namespace dhub
