#include "threeyes/store/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdlib>

#include "threeyes/io/fixture.hpp"
#include "threeyes/util/errors.hpp"

namespace threeyes::store {

namespace fs = std::filesystem;

StoreLock::StoreLock(const fs::path& root, bool exclusive) {
  fs::create_directories(root);
  fs::path lock_path = root / ".lock";
  fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0644);
  if (fd_ < 0) throw StoreError("cannot open lock file " + lock_path.string());
  if (::flock(fd_, exclusive ? LOCK_EX : LOCK_SH) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw StoreError("cannot lock store at " + root.string());
  }
}

StoreLock::~StoreLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

SnapshotStore::SnapshotStore(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_ / "snapshots");
}

fs::path SnapshotStore::resolve_root(const std::optional<std::string>& flag) {
  if (flag.has_value() && !flag->empty()) return *flag;
  if (const char* env = std::getenv("THREEYES_STORE"); env && *env) return env;
  return ".threeyes-store";
}

fs::path SnapshotStore::bundle_dir(const std::string& hash) const {
  return root_ / "snapshots" / hash / "bundle";
}

fs::path SnapshotStore::derived_dir(const std::string& hash) const {
  return root_ / "snapshots" / hash / "derived";
}

std::string SnapshotStore::put(const VenueSnapshot& s) {
  StoreLock lock(root_, true);
  std::string hash = io::snapshot_hash(s);
  fs::path dir = bundle_dir(hash);
  if (!fs::exists(dir / io::FixtureBundle::kCycles)) {
    io::save_fixture(s, dir);
  }
  return hash;
}

std::vector<std::string> SnapshotStore::list() const {
  std::vector<std::string> out;
  fs::path snapshots = root_ / "snapshots";
  if (!fs::exists(snapshots)) return out;
  for (const fs::directory_entry& entry : fs::directory_iterator(snapshots)) {
    if (entry.is_directory()) out.push_back(entry.path().filename().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string SnapshotStore::resolve(const std::string& hash_or_prefix) const {
  if (hash_or_prefix.empty()) throw StoreError("empty snapshot hash");
  std::vector<std::string> matches;
  for (const std::string& hash : list()) {
    if (hash.rfind(hash_or_prefix, 0) == 0) matches.push_back(hash);
  }
  if (matches.empty()) throw StoreError("no stored snapshot matches '" + hash_or_prefix + "'");
  if (matches.size() > 1) throw StoreError("ambiguous snapshot prefix '" + hash_or_prefix + "'");
  return matches.front();
}

VenueSnapshot SnapshotStore::get(const std::string& hash_or_prefix) const {
  StoreLock lock(root_, false);
  return io::load_fixture(bundle_dir(resolve(hash_or_prefix)));
}

}  // namespace threeyes::store
