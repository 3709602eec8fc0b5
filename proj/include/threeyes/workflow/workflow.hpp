#pragma once

#include <map>
#include <string>
#include <vector>

#include "threeyes/core/types.hpp"

namespace threeyes::workflow {

/// The three decision facts the consent workflow gates on. Every one of the
/// 3 x 3 x 5 combinations is a legal input.
struct WorkflowInputs {
  ReviewerDecision reviewer_decision = ReviewerDecision::no_response;
  Acceptance acceptance = Acceptance::pending;
  AuthorChoice author_decision = AuthorChoice::no_response;
};

enum class ArtifactKind { review, draft };

const char* to_string(ArtifactKind k);

/// Tier assignment for one artifact, with the decision facts that produced it.
struct Assignment {
  std::string artifact_id;
  ArtifactKind kind = ArtifactKind::review;
  Tier tier = Tier::Excluded;
  std::vector<std::string> derivation;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// The three-gate decision for one review:
///  - no reviewer consent  -> Excluded, whatever else happened;
///  - consent, not (yet) accepted -> Protected1Y;
///  - consent + acceptance, authors silent/declining/paper-only -> Protected2Y;
///  - consent + acceptance + author permission for reviews -> Public3Y.
Tier classify_review(const WorkflowInputs& in);

/// Draft gate: only accepted drafts whose authors donated become public;
/// there is no protected tier for drafts.
Tier classify_draft(Acceptance acceptance, AuthorChoice author_decision);

/// Applies the gates to a whole snapshot. Emits exactly one assignment per
/// review and one per submission draft, joining each review to its reviewer's
/// bulk consent (default no_response), its submission's acceptance, and the
/// submission's author decision (default no_response). Pure and
/// order-independent: permuting snapshot records yields identical output.
///
/// Throws IntegrityError when validate_snapshot(s) is non-empty.
std::vector<Assignment> run_workflow(const VenueSnapshot& s);

/// submission id -> its earlier versions, most recent first.
using ResubmissionMap = std::map<std::string, std::vector<std::string>>;

/// Extends run_workflow with the "all previous versions" author option:
/// earlier-version drafts and their reviewer-consented reviews are promoted
/// exactly as the current version's are, never beyond the current version's
/// tier. Throws CycleError when the map loops.
std::vector<Assignment> apply_previous_versions(const VenueSnapshot& s,
                                                const ResubmissionMap& link);

}  // namespace threeyes::workflow
