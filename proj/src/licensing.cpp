#include "threeyes/licensing/licensing.hpp"

#include <algorithm>
#include <stdexcept>

#include "threeyes/util/errors.hpp"
#include "threeyes/util/sha256.hpp"

namespace threeyes::licensing {

namespace detail {
extern const unsigned char k_reviewer_agreement[];
extern const std::size_t k_reviewer_agreement_len;
extern const unsigned char k_author_agreement[];
extern const std::size_t k_author_agreement_len;
extern const unsigned char k_reviewer_disclaimer[];
extern const std::size_t k_reviewer_disclaimer_len;
extern const unsigned char k_cc_by_nc_sa_4[];
extern const std::size_t k_cc_by_nc_sa_4_len;
}  // namespace detail

const char* to_string(AgreementKind k) {
  return k == AgreementKind::reviewer_agreement ? "reviewer_agreement" : "author_agreement";
}

AgreementKind agreement_kind_from_string(const std::string& s) {
  if (s == "reviewer_agreement") return AgreementKind::reviewer_agreement;
  if (s == "author_agreement") return AgreementKind::author_agreement;
  throw std::invalid_argument("unknown agreement kind '" + s + "'");
}

std::string_view reviewer_agreement_text() {
  return {reinterpret_cast<const char*>(detail::k_reviewer_agreement),
          detail::k_reviewer_agreement_len};
}

std::string_view author_agreement_text() {
  return {reinterpret_cast<const char*>(detail::k_author_agreement),
          detail::k_author_agreement_len};
}

std::string_view reviewer_disclaimer_text() {
  return {reinterpret_cast<const char*>(detail::k_reviewer_disclaimer),
          detail::k_reviewer_disclaimer_len};
}

std::string_view cc_license_text() {
  return {reinterpret_cast<const char*>(detail::k_cc_by_nc_sa_4),
          detail::k_cc_by_nc_sa_4_len};
}

std::string_view emit_disclaimer(DisclaimerKind kind) {
  return kind == DisclaimerKind::reviewer ? reviewer_disclaimer_text() : author_agreement_text();
}

const std::map<std::string, std::string>& resource_hashes() {
  static const std::map<std::string, std::string> hashes = {
      {"reviewer_agreement.txt", util::sha256_hex(reviewer_agreement_text())},
      {"author_agreement.txt", util::sha256_hex(author_agreement_text())},
      {"reviewer_disclaimer.txt", util::sha256_hex(reviewer_disclaimer_text())},
      {"cc_by_nc_sa_4.txt", util::sha256_hex(cc_license_text())},
  };
  return hashes;
}

std::string agreement_text_hash(AgreementKind kind) {
  return resource_hashes().at(kind == AgreementKind::reviewer_agreement
                                  ? "reviewer_agreement.txt"
                                  : "author_agreement.txt");
}

const LicenseGrant& GrantStore::record_grant(const workflow::Assignment& assignment,
                                             Timestamp granted_at) {
  auto existing = grants_.find(assignment.artifact_id);
  if (existing != grants_.end()) return existing->second;

  const Tier required = assignment.kind == workflow::ArtifactKind::review
                            ? Tier::Protected1Y
                            : Tier::Public3Y;
  if (assignment.tier < required) {
    throw TierError("artifact '" + assignment.artifact_id + "' was never donated (tier " +
                    std::string(to_string(assignment.tier)) + ")");
  }

  LicenseGrant grant;
  grant.artifact_id = assignment.artifact_id;
  grant.granted_at = granted_at;
  grant.agreement_kind = assignment.kind == workflow::ArtifactKind::review
                             ? AgreementKind::reviewer_agreement
                             : AgreementKind::author_agreement;
  grant.agreement_text_hash = agreement_text_hash(grant.agreement_kind);
  return grants_.emplace(assignment.artifact_id, std::move(grant)).first->second;
}

const LicenseGrant* GrantStore::find(const std::string& artifact_id) const {
  auto it = grants_.find(artifact_id);
  return it == grants_.end() ? nullptr : &it->second;
}

namespace {

void check_display_name(const std::string& name) {
  if (name.empty()) throw std::invalid_argument("empty display name");
  if (name.find(',') != std::string::npos || name.find('\n') != std::string::npos ||
      name.find('\r') != std::string::npos) {
    throw std::invalid_argument("display name '" + name +
                                "' would corrupt the copyright notice");
  }
}

}  // namespace

void AttributionRegistry::add(const VenueSnapshot& snapshot, const std::string& principal_id,
                              const std::string& display_name) {
  check_display_name(display_name);
  std::set<std::string> scope;
  for (const ReviewerConsent& c : snapshot.reviewer_consents) {
    if (c.reviewer_id == principal_id && c.attribution_requested &&
        c.decision == ReviewerDecision::agree) {
      scope.insert(c.cycle_id);
    }
  }
  if (scope.empty()) {
    throw IntegrityError("no attribution-requesting consent backs principal '" + principal_id +
                         "'");
  }
  entries_.push_back(AttributionEntry{principal_id, display_name, std::move(scope)});
}

std::vector<std::string> AttributionRegistry::display_names() const {
  std::vector<std::string> names;
  names.reserve(entries_.size());
  for (const AttributionEntry& e : entries_) names.push_back(e.display_name);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

namespace {

constexpr std::string_view kNoticeHead = "Copyright © ";
constexpr std::string_view kNoticeAdministered =
    " administered by the Association for Computational Linguistics (ACL) on behalf of "
    "ACL content contributors";
constexpr std::string_view kNoticeNamed = ": ";
constexpr std::string_view kNoticeAnonymousTail = " who wish to remain anonymous.";
constexpr std::string_view kNoticeNamedTail =
    ", and other contributors who wish to remain anonymous.";
constexpr std::string_view kNoticeLicenseSentence =
    " Content displayed on this webpage is made available under a Creative Commons "
    "Attribution-NonCommercial-ShareAlike 4.0 International License.";

}  // namespace

std::string build_copyright_notice(int year, const std::vector<std::string>& attributed) {
  std::vector<std::string> names = attributed;
  for (const std::string& name : names) check_display_name(name);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());

  std::string notice;
  notice += kNoticeHead;
  notice += std::to_string(year);
  notice += kNoticeAdministered;
  if (names.empty()) {
    notice += kNoticeAnonymousTail;
  } else {
    notice += kNoticeNamed;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (i > 0) notice += ", ";
      notice += names[i];
    }
    notice += kNoticeNamedTail;
  }
  notice += kNoticeLicenseSentence;
  return notice;
}

std::optional<std::vector<std::string>> parse_copyright_notice(const std::string& notice) {
  if (notice.rfind(kNoticeHead, 0) != 0) return std::nullopt;
  std::size_t admin = notice.find(kNoticeAdministered);
  if (admin == std::string::npos) return std::nullopt;
  if (notice.find(kNoticeLicenseSentence) == std::string::npos) return std::nullopt;

  std::size_t after = admin + kNoticeAdministered.size();
  if (notice.compare(after, kNoticeAnonymousTail.size(), kNoticeAnonymousTail) == 0) {
    return std::vector<std::string>{};
  }
  if (notice.compare(after, kNoticeNamed.size(), kNoticeNamed) != 0) return std::nullopt;
  std::size_t names_begin = after + kNoticeNamed.size();
  std::size_t names_end = notice.find(kNoticeNamedTail, names_begin);
  if (names_end == std::string::npos) return std::nullopt;

  std::vector<std::string> names;
  std::size_t pos = names_begin;
  while (pos < names_end) {
    std::size_t comma = notice.find(", ", pos);
    std::size_t end = (comma == std::string::npos || comma > names_end) ? names_end : comma;
    names.push_back(notice.substr(pos, end - pos));
    pos = end + 2;
  }
  return names;
}

}  // namespace threeyes::licensing
