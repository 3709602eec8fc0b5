#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "threeyes/core/types.hpp"

namespace threeyes::io {

/// Canonical at-rest form of a snapshot: one JSONL file per record type,
/// records sorted by id, UTF-8, field names matching the data model.
struct FixtureBundle {
  std::filesystem::path dir;

  static constexpr const char* kCycles = "cycles.jsonl";
  static constexpr const char* kSubmissions = "submissions.jsonl";
  static constexpr const char* kReviews = "reviews.jsonl";
  static constexpr const char* kReviewerConsents = "reviewer_consents.jsonl";
  static constexpr const char* kAuthorDecisions = "author_decisions.jsonl";
  static constexpr const char* kIdentityMap = "identity_map.jsonl";  // optional

  /// Files in canonical order (identity_map last, only if present on disk).
  std::vector<std::filesystem::path> files() const;
};

/// Loads and validates a bundle. Duplicate consent rows for one
/// (reviewer, cycle) are resolved last-by-timestamp; dropped rows are
/// reported through `warnings` when given. Throws ParseError with file:line
/// context for malformed lines and IntegrityError when the parsed snapshot
/// fails validation.
VenueSnapshot load_fixture(const std::filesystem::path& dir,
                           std::vector<std::string>* warnings = nullptr);

/// Writes the canonical bundle; output is byte-identical for equal snapshots
/// regardless of in-memory record order. The snapshot must validate.
FixtureBundle save_fixture(const VenueSnapshot& s, const std::filesystem::path& dir);

/// Content hash of a snapshot: SHA-256 over the canonical serialized files.
std::string snapshot_hash(const VenueSnapshot& s);

/// Records sorted by their canonical keys (the order save_fixture writes).
/// Record order carries no meaning, so equality of canonical forms is the
/// right notion of snapshot equality.
VenueSnapshot canonicalize(VenueSnapshot s);

}  // namespace threeyes::io
