#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "threeyes/core/types.hpp"

namespace threeyes::store {

/// Advisory lock over a store root (flock on <root>/.lock); exclusive for
/// writers, shared for readers. Released on destruction.
class StoreLock {
 public:
  StoreLock(const std::filesystem::path& root, bool exclusive);
  ~StoreLock();
  StoreLock(const StoreLock&) = delete;
  StoreLock& operator=(const StoreLock&) = delete;

 private:
  int fd_ = -1;
};

/// Content-addressed snapshot store: a directory of canonical fixture
/// bundles keyed by their SHA-256 content hash.
class SnapshotStore {
 public:
  explicit SnapshotStore(std::filesystem::path root);

  /// --store flag beats $THREEYES_STORE beats ./.threeyes-store.
  static std::filesystem::path resolve_root(const std::optional<std::string>& flag);

  /// Persists the snapshot; returns its content hash. Idempotent.
  std::string put(const VenueSnapshot& s);

  /// Loads by full hash or unique prefix. Throws StoreError when unknown or
  /// ambiguous.
  VenueSnapshot get(const std::string& hash_or_prefix) const;

  std::string resolve(const std::string& hash_or_prefix) const;
  std::vector<std::string> list() const;

  std::filesystem::path bundle_dir(const std::string& hash) const;
  /// Per-snapshot scratch area for workflow outputs (assignments, grants).
  std::filesystem::path derived_dir(const std::string& hash) const;

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
};

}  // namespace threeyes::store
