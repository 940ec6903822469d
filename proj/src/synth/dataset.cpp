#include "dhub/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

namespace dhub {
namespace {

template <class T>
void sort_by_id(std::vector<T>& items) {
  std::sort(items.begin(), items.end(), [](const T& a, const T& b) { return a.id < b.id; });
}

std::size_t line_at(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

/// Best-effort line of an entity's "id" inside a section; falls back to the
/// section key, then to line 1.
std::size_t locate(std::string_view text, std::string_view section, std::string_view id) {
  const std::string key = "\"" + std::string(section) + "\"";
  const auto section_pos = text.find(key);
  const auto from = section_pos == std::string_view::npos ? 0 : section_pos;
  if (!id.empty()) {
    const std::string needle = "\"" + std::string(id) + "\"";
    for (auto pos = text.find(needle, from); pos != std::string_view::npos;
         pos = text.find(needle, pos + 1)) {
      // Skip foreign-key mentions: the id field is preceded by "id":
      const auto before = text.substr(0, pos);
      const auto colon = before.find_last_not_of(" \t");
      if (colon != std::string_view::npos && before[colon] == ':') {
        const auto key_end = before.find_last_not_of(" \t", colon - 1);
        if (key_end != std::string_view::npos && key_end >= 3 &&
            before.substr(key_end - 3, 4) == "\"id\"") {
          return line_at(text, pos);
        }
      }
    }
  }
  return section_pos == std::string_view::npos ? 1 : line_at(text, section_pos);
}

template <class T>
std::vector<T> read_section(const json& root, std::string_view text, const char* section,
                            bool required) {
  std::vector<T> out;
  const auto it = root.find(section);
  if (it == root.end()) {
    if (required) {
      throw Error(ErrorCode::Format, std::string("missing section \"") + section + "\" (line 1)");
    }
    return out;
  }
  if (!it->is_array()) {
    throw Error(ErrorCode::Format, std::string("section \"") + section + "\" must be an array (line " +
                                       std::to_string(locate(text, section, {})) + ")");
  }
  out.reserve(it->size());
  for (std::size_t i = 0; i < it->size(); ++i) {
    const auto& item = (*it)[i];
    try {
      out.push_back(item.get<T>());
    } catch (const std::exception& e) {
      std::string id;
      if (item.is_object() && item.contains("id") && item["id"].is_string()) {
        id = item["id"].get<std::string>();
      }
      throw Error(ErrorCode::Format, std::string(section) + "[" + std::to_string(i) + "]" +
                                         (id.empty() ? "" : " " + id) + ": " + e.what() +
                                         " (line " + std::to_string(locate(text, section, id)) +
                                         ")");
    }
  }
  return out;
}

struct Issue {
  std::string section;
  std::string id;
  std::string message;
};

std::vector<Issue> collect_issues(const Dataset& d) {
  std::vector<Issue> issues;
  std::map<std::string, std::string, std::less<>> kinds;  // id -> section
  std::map<std::string, OrgRole, std::less<>> roles;

  auto note_id = [&](const std::string& section, const std::string& id) {
    if (!kinds.emplace(id, section).second) {
      issues.push_back({section, id, "duplicate id " + id});
    }
  };
  auto check = [&](const std::string& section, const std::string& id, const ValidationResult& r) {
    for (const auto& v : r.violations) issues.push_back({section, id, v});
  };
  auto resolve = [&](const std::string& section, const std::string& id, const char* field,
                     const std::string& target, std::string_view target_section) {
    auto it = kinds.find(target);
    if (it == kinds.end() || it->second != target_section) {
      issues.push_back({section, id, std::string("unresolved reference: ") + field + " " + target +
                                         " does not exist"});
      return false;
    }
    return true;
  };
  auto require_role = [&](const std::string& section, const std::string& id, const char* field,
                          const std::string& target, OrgRole role) {
    if (resolve(section, id, field, target, "organizations") && roles.at(target) != role) {
      issues.push_back({section, id, std::string(field) + " " + target + " must be a " +
                                         std::string(to_string(role))});
    }
  };

  for (const auto& o : d.organizations) {
    note_id("organizations", o.id);
    roles[o.id] = o.role;
  }
  for (const auto& c : d.challenges) note_id("challenges", c.id);
  for (const auto& s : d.solutions) note_id("solutions", s.id);
  bool has_default = false;
  for (const auto& p : d.profiles) {
    note_id("profiles", p.id);
    has_default = has_default || p.id == kDefaultProfileId;
  }
  if (!has_default) kinds.emplace(std::string(kDefaultProfileId), "profiles");
  for (const auto& m : d.matches) note_id("matches", m.id);
  for (const auto& x : d.deployments) note_id("deployments", x.id);

  for (const auto& o : d.organizations) check("organizations", o.id, validate_entity(o));
  for (const auto& c : d.challenges) {
    check("challenges", c.id, validate_entity(c));
    require_role("challenges", c.id, "deployer_id", c.deployer_id, OrgRole::Deployer);
  }
  for (const auto& s : d.solutions) {
    check("solutions", s.id, validate_entity(s));
    require_role("solutions", s.id, "provider_id", s.provider_id, OrgRole::Provider);
  }
  for (const auto& p : d.profiles) check("profiles", p.id, validate_entity(p));
  for (const auto& m : d.matches) {
    check("matches", m.id, validate_entity(m));
    resolve("matches", m.id, "challenge_id", m.challenge_id, "challenges");
    resolve("matches", m.id, "solution_id", m.solution_id, "solutions");
    resolve("matches", m.id, "profile_id", m.profile_id, "profiles");
  }
  for (const auto& x : d.deployments) {
    check("deployments", x.id, validate_entity(x));
    resolve("deployments", x.id, "match_id", x.match_id, "matches");
    if (x.financier_id) {
      require_role("deployments", x.id, "financier_id", *x.financier_id, OrgRole::Financier);
    }
  }
  return issues;
}

std::string describe(const Issue& issue) {
  std::string kind = issue.section;
  if (!kind.empty() && kind.back() == 's') kind.pop_back();
  return kind + " " + issue.id + ": " + issue.message;
}

}  // namespace

std::string dataset_to_text(Dataset d, DatasetSections sections) {
  sort_by_id(d.organizations);
  sort_by_id(d.challenges);
  sort_by_id(d.solutions);
  json root = json::object();
  root["meta"] = d.meta;
  root["organizations"] = d.organizations;
  root["challenges"] = d.challenges;
  root["solutions"] = d.solutions;
  if (sections == DatasetSections::Snapshot) {
    sort_by_id(d.profiles);
    sort_by_id(d.matches);
    sort_by_id(d.deployments);
    root["profiles"] = d.profiles;
    root["matches"] = d.matches;
    root["deployments"] = d.deployments;
  }
  return root.dump(2) + "\n";
}

Dataset dataset_from_text(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Format, "malformed JSON at line " + std::to_string(line_at(text, e.byte ? e.byte - 1 : 0)) +
                                       ": " + e.what());
  }
  if (!root.is_object()) throw Error(ErrorCode::Format, "dataset must be a JSON object (line 1)");

  Dataset d;
  d.meta = root.value("meta", json::object());
  d.organizations = read_section<Organization>(root, text, "organizations", true);
  d.challenges = read_section<Challenge>(root, text, "challenges", true);
  d.solutions = read_section<Solution>(root, text, "solutions", true);
  d.profiles = read_section<WeightProfile>(root, text, "profiles", false);
  d.matches = read_section<MatchResult>(root, text, "matches", false);
  d.deployments = read_section<Deployment>(root, text, "deployments", false);
  return d;
}

std::vector<std::string> check_dataset(const Dataset& dataset) {
  std::vector<std::string> out;
  for (const auto& issue : collect_issues(dataset)) out.push_back(describe(issue));
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Format, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file_atomic(const std::filesystem::path& path, std::string_view text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Format, "cannot write " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorCode::Format, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Format, "cannot replace " + path.string() + ": " + ec.message());
}

void export_dataset(const Dataset& dataset, const std::filesystem::path& path,
                    DatasetSections sections) {
  write_text_file_atomic(path, dataset_to_text(dataset, sections));
}

Dataset import_dataset(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  Dataset d = dataset_from_text(text);
  const auto issues = collect_issues(d);
  if (!issues.empty()) {
    std::vector<std::string> details;
    for (const auto& i : issues) {
      details.push_back(describe(i) + " (line " + std::to_string(locate(text, i.section, i.id)) + ")");
    }
    throw Error(ErrorCode::Format, path.string() + ": " + details.front(), details);
  }
  return d;
}

}  // namespace dhub
