#include "dhub/store.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <mutex>

namespace dhub {
namespace {

constexpr std::string_view kSnapshotKind = "dhub-store-snapshot";

template <class T>
struct KindOf;
template <>
struct KindOf<Organization> {
  static constexpr EntityKind value = EntityKind::Organization;
  static constexpr std::string_view prefix = "org";
};
template <>
struct KindOf<Challenge> {
  static constexpr EntityKind value = EntityKind::Challenge;
  static constexpr std::string_view prefix = "chl";
};
template <>
struct KindOf<Solution> {
  static constexpr EntityKind value = EntityKind::Solution;
  static constexpr std::string_view prefix = "sol";
};
template <>
struct KindOf<WeightProfile> {
  static constexpr EntityKind value = EntityKind::Profile;
  static constexpr std::string_view prefix = "wpf";
};
template <>
struct KindOf<MatchResult> {
  static constexpr EntityKind value = EntityKind::Match;
  static constexpr std::string_view prefix = "mat";
};
template <>
struct KindOf<Deployment> {
  static constexpr EntityKind value = EntityKind::Deployment;
  static constexpr std::string_view prefix = "dep";
};

template <class T>
IdMap<std::string, T>& table_for(StoreTables& t) {
  if constexpr (std::is_same_v<T, Organization>) return t.organizations;
  else if constexpr (std::is_same_v<T, Challenge>) return t.challenges;
  else if constexpr (std::is_same_v<T, Solution>) return t.solutions;
  else if constexpr (std::is_same_v<T, WeightProfile>) return t.profiles;
  else if constexpr (std::is_same_v<T, MatchResult>) return t.matches;
  else return t.deployments;
}

template <class T>
const IdMap<std::string, T>& table_for(const StoreTables& t) {
  return table_for<T>(const_cast<StoreTables&>(t));
}

/// Serial number of "<prefix>-NNNNNN", if the id has that shape.
std::optional<long> serial_of(std::string_view id, std::string_view prefix) {
  if (id.size() <= prefix.size() + 1 || id.substr(0, prefix.size()) != prefix ||
      id[prefix.size()] != '-') {
    return std::nullopt;
  }
  const auto digits = id.substr(prefix.size() + 1);
  long n = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc{} || p != digits.data() + digits.size()) return std::nullopt;
  return n;
}

std::string kind_noun(EntityKind k) {
  switch (k) {
    case EntityKind::Organization: return "organization";
    case EntityKind::Challenge: return "challenge";
    case EntityKind::Solution: return "solution";
    case EntityKind::Profile: return "profile";
    case EntityKind::Match: return "match";
    case EntityKind::Deployment: return "deployment";
  }
  return "entity";
}

template <class T>
const T& must_find(const IdMap<std::string, T>& table, std::string_view id, EntityKind kind) {
  auto it = table.find(id);
  if (it == table.end()) {
    throw Error(ErrorCode::NotFound, kind_noun(kind) + " " + std::string(id) + " not found");
  }
  return it->second;
}

}  // namespace

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::Organization: return "organizations";
    case EntityKind::Challenge: return "challenges";
    case EntityKind::Solution: return "solutions";
    case EntityKind::Profile: return "profiles";
    case EntityKind::Match: return "matches";
    case EntityKind::Deployment: return "deployments";
  }
  return "";
}

EntityKind entity_kind_from_string(std::string_view name) {
  for (auto k : {EntityKind::Organization, EntityKind::Challenge, EntityKind::Solution,
                 EntityKind::Profile, EntityKind::Match, EntityKind::Deployment}) {
    if (to_string(k) == name || kind_noun(k) == name) return k;
  }
  throw Error(ErrorCode::Input, "unknown entity kind '" + std::string(name) + "'");
}

Store::Store() {
  auto lock = lock_exclusive();
  put_locked(default_profile());
  dirty_ = false;
}

Store::Store(std::filesystem::path backing_path) : Store() {
  backing_path_ = std::move(backing_path);
}

std::unique_ptr<Store> Store::restore(const std::filesystem::path& path) {
  auto store = std::make_unique<Store>(path);
  store->load(dataset_from_text(read_text_file(path)));
  return store;
}

void Store::clear_locked() {
  tables_ = {};
  kinds_.clear();
  referrers_.clear();
  next_serial_.clear();
}

void Store::load(const Dataset& dataset) {
  auto lock = lock_exclusive();
  StoreTables saved_tables = tables_;
  auto saved_kinds = kinds_;
  auto saved_referrers = referrers_;
  auto saved_serial = next_serial_;
  try {
    clear_locked();
    put_locked(default_profile());
    for (const auto& o : dataset.organizations) put_locked(o);
    for (const auto& c : dataset.challenges) put_locked(c);
    for (const auto& s : dataset.solutions) put_locked(s);
    for (const auto& p : dataset.profiles) put_locked(p);
    for (const auto& m : dataset.matches) put_locked(m);
    for (const auto& d : dataset.deployments) put_locked(d);
  } catch (...) {
    tables_ = std::move(saved_tables);
    kinds_ = std::move(saved_kinds);
    referrers_ = std::move(saved_referrers);
    next_serial_ = std::move(saved_serial);
    throw;
  }
  const auto& meta = dataset.meta;
  if (meta.is_object() && meta.value("kind", "") == kSnapshotKind) {
    source_meta_ = meta.value("source", json::object());
  } else {
    source_meta_ = meta;
  }
  dirty_ = false;
}

// ---------------------------------------------------------------------------
// References

std::vector<std::string> Store::references_of_locked(const Challenge& c) const {
  return {c.deployer_id};
}
std::vector<std::string> Store::references_of_locked(const Solution& s) const {
  return {s.provider_id};
}
std::vector<std::string> Store::references_of_locked(const MatchResult& m) const {
  return {m.challenge_id, m.solution_id, m.profile_id};
}
std::vector<std::string> Store::references_of_locked(const Deployment& d) const {
  std::vector<std::string> refs{d.match_id};
  if (d.financier_id) refs.push_back(*d.financier_id);
  return refs;
}

namespace {

void require_org(const StoreTables& t, const std::string& owner, const char* field,
                 const std::string& id, OrgRole role) {
  auto it = t.organizations.find(id);
  if (it == t.organizations.end()) {
    throw Error(ErrorCode::Integrity,
                owner + ": " + field + " references missing organization " + id, {id});
  }
  if (it->second.role != role) {
    throw Error(ErrorCode::Integrity, owner + ": " + field + " " + id + " must be a " +
                                          std::string(to_string(role)) + ", is a " +
                                          std::string(to_string(it->second.role)),
                {id});
  }
}

template <class T>
void require_in(const IdMap<std::string, T>& table, const std::string& owner, const char* field,
                const std::string& id, EntityKind kind) {
  if (!table.count(id)) {
    throw Error(ErrorCode::Integrity,
                owner + ": " + field + " references missing " + kind_noun(kind) + " " + id, {id});
  }
}

}  // namespace

void Store::check_references_locked(const Organization& o) const {
  auto it = tables_.organizations.find(o.id);
  if (it != tables_.organizations.end() && it->second.role != o.role) {
    auto ref = referrers_.find(o.id);
    if (ref != referrers_.end() && !ref->second.empty()) {
      std::vector<std::string> ids(ref->second.begin(), ref->second.end());
      throw Error(ErrorCode::Integrity,
                  "organization " + o.id + " is referenced; its role cannot change", ids);
    }
  }
}

void Store::check_references_locked(const Challenge& c) const {
  require_org(tables_, "challenge " + c.id, "deployer_id", c.deployer_id, OrgRole::Deployer);
}

void Store::check_references_locked(const Solution& s) const {
  require_org(tables_, "solution " + s.id, "provider_id", s.provider_id, OrgRole::Provider);
}

void Store::check_references_locked(const WeightProfile& p) const {
  auto it = tables_.profiles.find(p.id);
  if (it == tables_.profiles.end() || it->second.weights == p.weights) return;
  if (p.id == kDefaultProfileId) {
    throw Error(ErrorCode::Integrity, "the default profile is built in and cannot be changed");
  }
  auto ref = referrers_.find(p.id);
  if (ref != referrers_.end() && !ref->second.empty()) {
    std::vector<std::string> ids(ref->second.begin(), ref->second.end());
    throw Error(ErrorCode::Integrity, "profile " + p.id + " is referenced; weights cannot change",
                ids);
  }
}

void Store::check_references_locked(const MatchResult& m) const {
  const auto owner = "match " + m.id;
  require_in(tables_.challenges, owner, "challenge_id", m.challenge_id, EntityKind::Challenge);
  require_in(tables_.solutions, owner, "solution_id", m.solution_id, EntityKind::Solution);
  require_in(tables_.profiles, owner, "profile_id", m.profile_id, EntityKind::Profile);
}

void Store::check_references_locked(const Deployment& d) const {
  const auto owner = "deployment " + d.id;
  require_in(tables_.matches, owner, "match_id", d.match_id, EntityKind::Match);
  if (d.financier_id) {
    require_org(tables_, owner, "financier_id", *d.financier_id, OrgRole::Financier);
  }
  auto it = tables_.deployments.find(d.id);
  if (it != tables_.deployments.end()) {
    const auto from = it->second.status;
    if (from != d.status && !is_legal_transition(from, d.status)) {
      throw Error(ErrorCode::State, "deployment " + d.id + ": illegal transition " +
                                        std::string(to_string(from)) + " -> " +
                                        std::string(to_string(d.status)));
    }
  }
}

void Store::link_locked(const std::string& from, const std::vector<std::string>& targets) {
  for (const auto& t : targets) referrers_[t].insert(from);
}

void Store::unlink_locked(const std::string& from, const std::vector<std::string>& targets) {
  for (const auto& t : targets) {
    auto it = referrers_.find(t);
    if (it == referrers_.end()) continue;
    it->second.erase(from);
    if (it->second.empty()) referrers_.erase(it);
  }
}

// ---------------------------------------------------------------------------
// Writes

template <class T>
std::string Store::put_locked(T entity) {
  constexpr EntityKind kind = KindOf<T>::value;
  if (auto r = validate_entity(entity); !r.ok()) {
    throw Error(ErrorCode::Validation,
                kind_noun(kind) + " " + entity.id + " is invalid: " + r.violations.front(),
                r.violations);
  }
  if (auto k = kinds_.find(entity.id); k != kinds_.end() && k->second != kind) {
    throw Error(ErrorCode::Integrity,
                "id " + entity.id + " already belongs to a " + kind_noun(k->second));
  }
  check_references_locked(entity);

  auto& table = table_for<T>(tables_);
  const std::string id = entity.id;
  if (auto it = table.find(id); it != table.end()) {
    unlink_locked(id, references_of_locked(it->second));
  }
  link_locked(id, references_of_locked(entity));
  table.insert_or_assign(id, std::move(entity));
  kinds_[id] = kind;
  if (auto n = serial_of(id, KindOf<T>::prefix)) {
    long& next = next_serial_[kind];
    next = std::max(next, *n + 1);
  }
  dirty_ = true;
  return id;
}

template <class T>
std::string Store::insert_locked(T entity) {
  constexpr EntityKind kind = KindOf<T>::value;
  long& next = next_serial_[kind];
  next = std::max(next, 1L);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*s-%06ld", static_cast<int>(KindOf<T>::prefix.size()),
                KindOf<T>::prefix.data(), next);
  entity.id = buf;
  return put_locked(std::move(entity));
}

template <class T>
T Store::modify_locked(std::string_view id, const std::function<void(T&)>& edit) {
  T copy = must_find(table_for<T>(tables_), id, KindOf<T>::value);
  edit(copy);
  if (copy.id != id) throw Error(ErrorCode::Input, "modify cannot change an entity id");
  put_locked(copy);
  return copy;
}

std::string Store::put(Organization v) { auto l = lock_exclusive(); return put_locked(std::move(v)); }
std::string Store::put(Challenge v) { auto l = lock_exclusive(); return put_locked(std::move(v)); }
std::string Store::put(Solution v) { auto l = lock_exclusive(); return put_locked(std::move(v)); }
std::string Store::put(WeightProfile v) { auto l = lock_exclusive(); return put_locked(std::move(v)); }
std::string Store::put(MatchResult v) { auto l = lock_exclusive(); return put_locked(std::move(v)); }
std::string Store::put(Deployment v) { auto l = lock_exclusive(); return put_locked(std::move(v)); }

std::string Store::insert(Organization v) { auto l = lock_exclusive(); return insert_locked(std::move(v)); }
std::string Store::insert(Challenge v) { auto l = lock_exclusive(); return insert_locked(std::move(v)); }
std::string Store::insert(Solution v) { auto l = lock_exclusive(); return insert_locked(std::move(v)); }
std::string Store::insert(Deployment v) { auto l = lock_exclusive(); return insert_locked(std::move(v)); }

Challenge Store::modify(std::string_view id, const std::function<void(Challenge&)>& edit) {
  auto l = lock_exclusive();
  return modify_locked<Challenge>(id, edit);
}
Solution Store::modify(std::string_view id, const std::function<void(Solution&)>& edit) {
  auto l = lock_exclusive();
  return modify_locked<Solution>(id, edit);
}
Deployment Store::modify(std::string_view id, const std::function<void(Deployment&)>& edit) {
  auto l = lock_exclusive();
  return modify_locked<Deployment>(id, edit);
}

void Store::remove(EntityKind kind, std::string_view id) {
  auto lock = lock_exclusive();
  auto k = kinds_.find(id);
  if (k == kinds_.end() || k->second != kind) {
    throw Error(ErrorCode::NotFound, kind_noun(kind) + " " + std::string(id) + " not found");
  }
  if (id == kDefaultProfileId) {
    throw Error(ErrorCode::Integrity, "the default profile is built in and cannot be deleted");
  }
  if (auto ref = referrers_.find(id); ref != referrers_.end() && !ref->second.empty()) {
    std::vector<std::string> ids(ref->second.begin(), ref->second.end());
    std::string list;
    for (const auto& r : ids) list += (list.empty() ? "" : ", ") + r;
    throw Error(ErrorCode::Integrity,
                kind_noun(kind) + " " + std::string(id) + " is referenced by " + list, ids);
  }
  const std::string key(id);
  auto erase = [&](auto& table) {
    auto it = table.find(key);
    unlink_locked(key, references_of_locked(it->second));
    table.erase(it);
  };
  switch (kind) {
    case EntityKind::Organization: erase(tables_.organizations); break;
    case EntityKind::Challenge: erase(tables_.challenges); break;
    case EntityKind::Solution: erase(tables_.solutions); break;
    case EntityKind::Profile: erase(tables_.profiles); break;
    case EntityKind::Match: erase(tables_.matches); break;
    case EntityKind::Deployment: erase(tables_.deployments); break;
  }
  kinds_.erase(k);
  dirty_ = true;
}

// ---------------------------------------------------------------------------
// Reads

template <class T>
std::optional<T> Store::find(std::string_view id) const {
  auto lock = lock_shared();
  const auto& table = table_for<T>(tables_);
  auto it = table.find(id);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

template <class T>
T Store::get(std::string_view id) const {
  auto lock = lock_shared();
  return must_find(table_for<T>(tables_), id, KindOf<T>::value);
}

template <class T>
std::vector<T> Store::all() const {
  auto lock = lock_shared();
  std::vector<T> out;
  const auto& table = table_for<T>(tables_);
  out.reserve(table.size());
  for (const auto& [id, v] : table) out.push_back(v);
  return out;
}

#define DHUB_STORE_INSTANTIATE(T)                                        \
  template std::optional<T> Store::find<T>(std::string_view) const;      \
  template T Store::get<T>(std::string_view) const;                      \
  template std::vector<T> Store::all<T>() const;
DHUB_STORE_INSTANTIATE(Organization)
DHUB_STORE_INSTANTIATE(Challenge)
DHUB_STORE_INSTANTIATE(Solution)
DHUB_STORE_INSTANTIATE(WeightProfile)
DHUB_STORE_INSTANTIATE(MatchResult)
DHUB_STORE_INSTANTIATE(Deployment)
#undef DHUB_STORE_INSTANTIATE

std::vector<std::string> Store::referrers(std::string_view id) const {
  auto lock = lock_shared();
  auto it = referrers_.find(id);
  if (it == referrers_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

TraceChain Store::trace(std::string_view deployment_id) const {
  auto lock = lock_shared();
  const auto& t = tables_;
  TraceChain chain;
  chain.deployment = must_find(t.deployments, deployment_id, EntityKind::Deployment);
  chain.match = must_find(t.matches, chain.deployment.match_id, EntityKind::Match);
  chain.challenge = must_find(t.challenges, chain.match.challenge_id, EntityKind::Challenge);
  chain.solution = must_find(t.solutions, chain.match.solution_id, EntityKind::Solution);
  chain.deployer = must_find(t.organizations, chain.challenge.deployer_id, EntityKind::Organization);
  chain.provider = must_find(t.organizations, chain.solution.provider_id, EntityKind::Organization);
  if (chain.deployment.financier_id) {
    chain.financier =
        must_find(t.organizations, *chain.deployment.financier_id, EntityKind::Organization);
  }
  return chain;
}

std::vector<std::string> Store::integrity_scan() const {
  auto lock = lock_shared();
  const auto& t = tables_;
  std::vector<std::string> problems;
  auto org_role = [&](const std::string& owner, const std::string& id, OrgRole role) {
    auto it = t.organizations.find(id);
    if (it == t.organizations.end()) {
      problems.push_back(owner + " -> missing organization " + id);
    } else if (it->second.role != role) {
      problems.push_back(owner + " -> organization " + id + " has the wrong role");
    }
  };
  auto exists = [&](const auto& table, const std::string& owner, const std::string& id) {
    if (!table.count(id)) problems.push_back(owner + " -> missing " + id);
  };
  for (const auto& [id, c] : t.challenges) org_role(id, c.deployer_id, OrgRole::Deployer);
  for (const auto& [id, s] : t.solutions) org_role(id, s.provider_id, OrgRole::Provider);
  for (const auto& [id, m] : t.matches) {
    exists(t.challenges, id, m.challenge_id);
    exists(t.solutions, id, m.solution_id);
    exists(t.profiles, id, m.profile_id);
  }
  for (const auto& [id, d] : t.deployments) {
    exists(t.matches, id, d.match_id);
    if (d.financier_id) org_role(id, *d.financier_id, OrgRole::Financier);
  }
  return problems;
}

std::size_t Store::size() const {
  auto lock = lock_shared();
  return kinds_.size();
}

bool Store::dirty() const { return dirty_; }

Dataset Store::contents() const {
  auto lock = lock_shared();
  return contents_locked();
}

Dataset Store::contents_locked() const {
  Dataset d;
  d.meta = json{{"kind", kSnapshotKind}, {"version", 1}, {"source", source_meta_}};
  for (const auto& [id, v] : tables_.organizations) d.organizations.push_back(v);
  for (const auto& [id, v] : tables_.challenges) d.challenges.push_back(v);
  for (const auto& [id, v] : tables_.solutions) d.solutions.push_back(v);
  for (const auto& [id, v] : tables_.profiles) d.profiles.push_back(v);
  for (const auto& [id, v] : tables_.matches) d.matches.push_back(v);
  for (const auto& [id, v] : tables_.deployments) d.deployments.push_back(v);
  return d;
}

void Store::snapshot(const std::filesystem::path& path) const {
  // Writers stay blocked until the file is complete.
  auto lock = lock_shared();
  export_dataset(contents_locked(), path, DatasetSections::Snapshot);
  dirty_ = false;
}

void Store::flush() const {
  if (backing_path_) snapshot(*backing_path_);
}

}  // namespace dhub
