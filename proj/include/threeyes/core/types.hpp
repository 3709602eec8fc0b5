#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace threeyes {

/// Milliseconds since the Unix epoch, UTC. Integer so timing comparisons
/// (consent vs. review submission) are total and exact.
using Timestamp = std::int64_t;

/// Dataset tier an artifact ends up in after the consent workflow. The
/// declaration order is the tier order: Excluded < Protected1Y < Protected2Y
/// < Public3Y.
enum class Tier : int {
  Excluded = 0,
  Protected1Y = 1,
  Protected2Y = 2,
  Public3Y = 3,
};

constexpr bool operator<(Tier a, Tier b) { return int(a) < int(b); }
constexpr bool operator<=(Tier a, Tier b) { return int(a) <= int(b); }
constexpr bool operator>(Tier a, Tier b) { return int(a) > int(b); }
constexpr bool operator>=(Tier a, Tier b) { return int(a) >= int(b); }

enum class ReviewerDecision { agree, decline, no_response };

enum class Acceptance { accepted, rejected, pending };

/// The author's donation choice for an accepted submission.
enum class AuthorChoice {
  no_response,
  decline,
  paper_only,
  paper_and_reviews,
  paper_and_reviews_all_versions,
};

enum class BestPaper { yes, maybe, no };

const char* to_string(Tier t);
const char* to_string(ReviewerDecision d);
const char* to_string(Acceptance a);
const char* to_string(AuthorChoice c);
const char* to_string(BestPaper b);

Tier tier_from_string(const std::string& s);
ReviewerDecision reviewer_decision_from_string(const std::string& s);
Acceptance acceptance_from_string(const std::string& s);
AuthorChoice author_choice_from_string(const std::string& s);
BestPaper best_paper_from_string(const std::string& s);

/// Overall assessment on the 1.0, 1.5, ..., 5.0 lattice, stored in half-point
/// units so equality and bucketing stay exact.
struct ScoreHalf {
  int twice_value = 2;  // in [2, 10]

  static constexpr int kMinTwice = 2;
  static constexpr int kMaxTwice = 10;
  static constexpr int kLatticeSize = 9;

  double value() const { return twice_value / 2.0; }
  bool in_range() const { return twice_value >= kMinTwice && twice_value <= kMaxTwice; }
  /// Bucket index 0..8 for histogram use.
  int bucket() const { return twice_value - kMinTwice; }

  friend bool operator==(const ScoreHalf&, const ScoreHalf&) = default;
  friend auto operator<=>(const ScoreHalf&, const ScoreHalf&) = default;
};

/// Maps a decimal score onto the lattice. Throws std::invalid_argument for
/// values off the half-step lattice or outside [1, 5].
ScoreHalf encode_overall(double score);

struct Cycle {
  std::string id;
  std::string label;  // human-readable month tag, e.g. "2021-09"

  friend bool operator==(const Cycle&, const Cycle&) = default;
};

struct Submission {
  std::string id;
  std::string cycle_id;
  std::set<std::string> author_ids;       // pseudonymous principal ids, >= 1
  std::optional<std::string> draft_ref;   // opaque content handle
  Acceptance acceptance = Acceptance::pending;
  std::optional<std::string> venue;       // present iff accepted

  friend bool operator==(const Submission&, const Submission&) = default;
};

/// Free-text review form fields with their length caps.
struct TextFields {
  std::string paper_summary;
  std::string summary_of_strengths;
  std::string summary_of_weaknesses;
  std::string comments_suggestions_typos;
  std::string best_paper_justification;
  std::string ethical_concerns;

  static constexpr std::size_t kDefaultLimit = 20000;
  static constexpr std::size_t kEthicalConcernsLimit = 10000;

  friend bool operator==(const TextFields&, const TextFields&) = default;
};

struct ReviewRecord {
  std::string id;
  std::string submission_id;
  std::string reviewer_id;  // pseudonymous, scoped per cycle by the platform
  std::string cycle_id;
  TextFields text_fields;
  ScoreHalf overall;
  int confidence = 1;            // 1..5
  BestPaper best_paper = BestPaper::no;
  int replicability = 1;         // 1..5
  int datasets = 1;              // 1..5
  int software = 1;              // 1..5
  int author_identity_guess = 1; // 1..5
  Timestamp submitted_at = 0;

  friend bool operator==(const ReviewRecord&, const ReviewRecord&) = default;
};

/// A reviewer's bulk donation decision for one cycle; it covers all of the
/// reviewer's reviews in that cycle.
struct ReviewerConsent {
  std::string reviewer_id;
  std::string cycle_id;
  ReviewerDecision decision = ReviewerDecision::no_response;
  bool attribution_requested = false;
  std::optional<Timestamp> decided_at;  // absent iff no_response

  friend bool operator==(const ReviewerConsent&, const ReviewerConsent&) = default;
};

struct AuthorDecision {
  std::string submission_id;
  AuthorChoice decision = AuthorChoice::no_response;
  std::optional<Timestamp> decided_at;

  friend bool operator==(const AuthorDecision&, const AuthorDecision&) = default;
};

/// Complete immutable view of one or more reviewing cycles.
struct VenueSnapshot {
  std::vector<Cycle> cycles;
  std::vector<Submission> submissions;
  std::vector<ReviewRecord> reviews;
  std::vector<ReviewerConsent> reviewer_consents;
  std::vector<AuthorDecision> author_decisions;
  /// Optional map from per-cycle reviewer id to a stable cross-cycle id. When
  /// present it must cover every reviewer id appearing in reviews.
  std::optional<std::map<std::string, std::string>> identity_map;

  friend bool operator==(const VenueSnapshot&, const VenueSnapshot&) = default;
};

}  // namespace threeyes
