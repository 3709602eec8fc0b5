#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "threeyes/core/types.hpp"
#include "threeyes/workflow/workflow.hpp"

namespace threeyes::licensing {

inline constexpr const char* kLicenseId = "CC-BY-NC-SA-4.0";
inline constexpr const char* kLicensor = "Association for Computational Linguistics (ACL)";

enum class AgreementKind { reviewer_agreement, author_agreement };

const char* to_string(AgreementKind k);
AgreementKind agreement_kind_from_string(const std::string& s);

/// Irrevocable license transfer for one donated artifact. The agreement text
/// hash pins the exact agreement version in force when the grant was made.
struct LicenseGrant {
  std::string artifact_id;
  std::string license_id = kLicenseId;
  std::string licensor = kLicensor;
  Timestamp granted_at = 0;
  AgreementKind agreement_kind = AgreementKind::reviewer_agreement;
  std::string agreement_text_hash;
  bool irrevocable = true;

  friend bool operator==(const LicenseGrant&, const LicenseGrant&) = default;
};

/// Single-writer store of grants, keyed by artifact id. Recording is
/// idempotent: repeated calls return the original grant unchanged.
class GrantStore {
 public:
  /// Records a grant for a donated artifact. Reviews must have reached at
  /// least Protected1Y, drafts Public3Y; otherwise throws TierError.
  const LicenseGrant& record_grant(const workflow::Assignment& assignment, Timestamp granted_at);

  const LicenseGrant* find(const std::string& artifact_id) const;
  const std::map<std::string, LicenseGrant>& grants() const { return grants_; }
  std::size_t size() const { return grants_.size(); }

 private:
  std::map<std::string, LicenseGrant> grants_;
};

/// A reviewer who asked to be named, with the cycles the request covers.
/// Display names live only here; the rest of the system sees pseudonyms.
struct AttributionEntry {
  std::string principal_id;
  std::string display_name;
  std::set<std::string> scope;  // cycle ids

  friend bool operator==(const AttributionEntry&, const AttributionEntry&) = default;
};

class AttributionRegistry {
 public:
  /// Adds an entry backed by consents in the snapshot: the principal must
  /// have at least one consent with attribution_requested = true; its cycles
  /// become the scope. Throws IntegrityError for unbacked principals and
  /// std::invalid_argument for unusable display names (empty or containing
  /// a comma or line break, which would corrupt the copyright notice).
  void add(const VenueSnapshot& snapshot, const std::string& principal_id,
           const std::string& display_name);

  const std::vector<AttributionEntry>& entries() const { return entries_; }

  /// Deduplicated display names, sorted lexicographically.
  std::vector<std::string> display_names() const;

 private:
  std::vector<AttributionEntry> entries_;
};

/// Renders the collective copyright notice. Names are deduplicated and
/// sorted; with no names the contributor clause reads anonymous-only.
/// Throws std::invalid_argument on empty display names.
std::string build_copyright_notice(int year, const std::vector<std::string>& attributed);

/// Recovers the attributed name list from a generated notice; std::nullopt
/// when the text is not a notice produced by build_copyright_notice.
std::optional<std::vector<std::string>> parse_copyright_notice(const std::string& notice);

enum class DisclaimerKind { reviewer, author };

/// The bundled static text shown to a participant: the risk disclaimer for
/// reviewers, the license agreement for authors. Byte-identical to the
/// bundled resource on every call.
std::string_view emit_disclaimer(DisclaimerKind kind);

std::string_view reviewer_agreement_text();
std::string_view author_agreement_text();
std::string_view reviewer_disclaimer_text();
std::string_view cc_license_text();

/// SHA-256 hex digests of the bundled resources, keyed by file name.
const std::map<std::string, std::string>& resource_hashes();

std::string agreement_text_hash(AgreementKind kind);

}  // namespace threeyes::licensing
