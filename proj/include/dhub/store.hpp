#pragma once

// In-memory entity store with enforced referential integrity.
//
// Readers share a lock; writers are serialized. Every put validates the
// entity and resolves each foreign id before it becomes visible, and a delete
// is refused while anything still references the target, so a full scan can
// never find a dangling id. Persistence is a single snapshot file in the
// dataset format.

#include "dhub/dataset.hpp"
#include "dhub/model.hpp"

#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace dhub {

enum class EntityKind { Organization, Challenge, Solution, Profile, Match, Deployment };

std::string_view to_string(EntityKind kind);
EntityKind entity_kind_from_string(std::string_view name);

/// Deployment -> MatchResult -> Challenge/Solution -> Organizations.
struct TraceChain {
  Deployment deployment;
  MatchResult match;
  Challenge challenge;
  Solution solution;
  Organization deployer;
  Organization provider;
  std::optional<Organization> financier;

  /// Number of resolved records: 6, or 7 with a financier.
  std::size_t size() const { return financier ? 7 : 6; }
};

template <class K, class V>
using IdMap = std::map<K, V, std::less<>>;

struct StoreTables {
  IdMap<std::string, Organization> organizations;
  IdMap<std::string, Challenge> challenges;
  IdMap<std::string, Solution> solutions;
  IdMap<std::string, WeightProfile> profiles;
  IdMap<std::string, MatchResult> matches;
  IdMap<std::string, Deployment> deployments;
};

class Store {
 public:
  /// Empty store holding only the default weight profile.
  Store();
  explicit Store(std::filesystem::path backing_path);

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  /// Loads a dataset or snapshot file; the result is backed by `path`.
  static std::unique_ptr<Store> restore(const std::filesystem::path& path);

  /// Replaces the contents with `dataset`, inserting in dependency order.
  void load(const Dataset& dataset);

  // Writes. Insert-or-update by id; errors leave the store unchanged.
  std::string put(Organization org);
  std::string put(Challenge challenge);
  std::string put(Solution solution);
  std::string put(WeightProfile profile);
  std::string put(MatchResult match);
  std::string put(Deployment deployment);

  /// Assigns the next free "<prefix>-NNNNNN" id, then puts.
  std::string insert(Organization org);
  std::string insert(Challenge challenge);
  std::string insert(Solution solution);
  std::string insert(Deployment deployment);

  /// Atomic read-modify-write of one entity under the writer lock.
  Challenge modify(std::string_view id, const std::function<void(Challenge&)>& edit);
  Solution modify(std::string_view id, const std::function<void(Solution&)>& edit);
  Deployment modify(std::string_view id, const std::function<void(Deployment&)>& edit);

  /// Rejected with ErrorCode::Integrity (listing referrers) while referenced.
  void remove(EntityKind kind, std::string_view id);

  // Reads -------------------------------------------------------------------

  template <class T>
  std::optional<T> find(std::string_view id) const;

  /// ErrorCode::NotFound when absent.
  template <class T>
  T get(std::string_view id) const;

  template <class T>
  std::vector<T> all() const;

  std::vector<std::string> referrers(std::string_view id) const;

  TraceChain trace(std::string_view deployment_id) const;

  /// Runs `fn` with shared access to the tables.
  template <class F>
  auto read(F&& fn) const {
    auto lock = lock_shared();
    return fn(static_cast<const StoreTables&>(tables_));
  }

  /// Independent full scan for dangling references and role mismatches.
  std::vector<std::string> integrity_scan() const;

  std::size_t size() const;
  bool dirty() const;

  Dataset contents() const;

  void snapshot(const std::filesystem::path& path) const;
  /// Snapshot to the backing path; no-op for a store without one.
  void flush() const;
  const std::optional<std::filesystem::path>& backing_path() const { return backing_path_; }

 private:
  template <class T>
  std::string put_locked(T entity);
  template <class T>
  std::string insert_locked(T entity);
  template <class T>
  T modify_locked(std::string_view id, const std::function<void(T&)>& edit);

  std::vector<std::string> references_of_locked(const Organization&) const { return {}; }
  std::vector<std::string> references_of_locked(const Challenge& c) const;
  std::vector<std::string> references_of_locked(const Solution& s) const;
  std::vector<std::string> references_of_locked(const WeightProfile&) const { return {}; }
  std::vector<std::string> references_of_locked(const MatchResult& m) const;
  std::vector<std::string> references_of_locked(const Deployment& d) const;

  void check_references_locked(const Challenge& c) const;
  void check_references_locked(const Solution& s) const;
  void check_references_locked(const MatchResult& m) const;
  void check_references_locked(const Deployment& d) const;
  void check_references_locked(const Organization& o) const;
  void check_references_locked(const WeightProfile& p) const;

  void link_locked(const std::string& from, const std::vector<std::string>& targets);
  void unlink_locked(const std::string& from, const std::vector<std::string>& targets);
  void clear_locked();
  Dataset contents_locked() const;

  // The gate gives waiting writers priority: a writer holds it while it
  // waits for readers to drain, so new readers queue behind it.
  std::shared_lock<std::shared_mutex> lock_shared() const {
    std::lock_guard gate(gate_);
    return std::shared_lock(mutex_);
  }
  std::unique_lock<std::shared_mutex> lock_exclusive() const {
    std::lock_guard gate(gate_);
    return std::unique_lock(mutex_);
  }

  mutable std::mutex gate_;
  mutable std::shared_mutex mutex_;
  StoreTables tables_;
  // id -> kind for every stored entity, so ids stay unique across kinds
  IdMap<std::string, EntityKind> kinds_;
  // target id -> ids of the entities that reference it
  IdMap<std::string, std::set<std::string, std::less<>>> referrers_;
  std::map<EntityKind, long> next_serial_;
  std::optional<std::filesystem::path> backing_path_;
  json source_meta_ = json::object();
  mutable std::atomic<bool> dirty_ = false;
};

}  // namespace dhub
