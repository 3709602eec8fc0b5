#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "threeyes/core/types.hpp"
#include "threeyes/licensing/licensing.hpp"
#include "threeyes/workflow/workflow.hpp"

namespace threeyes::exporter {

/// A record withdrawn after release: named by the release it last appeared in
/// and its token there, so bundle consumers can drop it without this manifest
/// ever carrying a source id.
struct Tombstone {
  std::string release_id;
  std::string token;
  std::string kind;

  friend bool operator==(const Tombstone&, const Tombstone&) = default;
};

struct ExportManifest {
  std::string release_id;
  Timestamp created_at = 0;
  long reviews_exported = 0;
  long drafts_exported = 0;
  std::map<std::string, long> source_tier_counts;  // tier label -> assignments
  std::string license_id = licensing::kLicenseId;
  std::string notice_hash;
  std::map<std::string, std::string> agreement_text_hashes;
  std::vector<Tombstone> tombstones;
  std::string source_snapshot_hash;

  std::string to_json_string() const;
  static ExportManifest from_json_string(const std::string& text);
  static ExportManifest load(const std::filesystem::path& path);
};

struct ExportOptions {
  std::string release_id;
  int notice_year = 2022;  // export year, not review year
  Timestamp clock_ms = 0;  // pinned created_at
  /// Release policy: which assignment tiers may enter the bundle. Anything
  /// beyond Public3Y is a misconfiguration the leak guard rejects.
  std::set<Tier> tiers = {Tier::Public3Y};
  /// Replace principal/record ids with release-scoped tokens. Disabling this
  /// is a misconfiguration the leak guard rejects.
  bool redact_ids = true;
  /// Source artifact ids withdrawn by their contributors.
  std::vector<std::string> withdrawn;
  /// Previous release bundle; needed to turn withdrawals of already-released
  /// records into tombstones and to carry existing tombstones forward.
  std::optional<std::filesystem::path> prior_release_dir;
};

/// Assembles a public release bundle: public.jsonl (only Public3Y records,
/// principals replaced by release-scoped tokens), NOTICE.txt, LICENSE,
/// MANIFEST.json. The whole bundle is built and scanned in memory first; any
/// pseudonymous source id, any registry display name outside NOTICE.txt, or
/// any non-Public3Y record raises LeakError and nothing is written.
ExportManifest export_public(const VenueSnapshot& s,
                             const std::vector<workflow::Assignment>& assignments,
                             const licensing::GrantStore& grants,
                             const licensing::AttributionRegistry& registry,
                             const ExportOptions& options,
                             const std::filesystem::path& out_dir);

struct ProtectedReportOptions {
  /// Aggregates below this record count are suppressed.
  int suppression_floor = 5;
  /// Extra integer form fields to tabulate per subset (confidence,
  /// replicability, datasets, software, author_identity_guess). Naming a
  /// text or identity field here is a misconfiguration: LeakError.
  std::vector<std::string> passthrough_fields;
};

/// Writes aggregate-only statistics for the protected tiers (subsets "1y"
/// and "2y"): count rows, histograms, agreement, dispersion. No text fields,
/// no ids, no timestamps. LeakError (and no file) on any forbidden content.
void export_protected_report(const VenueSnapshot& s,
                             const std::vector<workflow::Assignment>& assignments,
                             const ProtectedReportOptions& options,
                             const std::filesystem::path& out_path);

/// Release-scoped pseudonym: stable within one release, unlinkable across
/// releases.
std::string release_token(const std::string& release_id, const std::string& kind,
                          const std::string& source_id);

}  // namespace threeyes::exporter
