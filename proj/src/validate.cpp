#include "threeyes/core/validate.hpp"

#include <set>
#include <unordered_map>
#include <unordered_set>

namespace threeyes {

std::string to_string(const Violation& v) {
  return v.record_id + ": " + v.invariant;
}

namespace {

bool in_1_to_5(int v) { return v >= 1 && v <= 5; }

}  // namespace

std::vector<Violation> validate_snapshot(const VenueSnapshot& s) {
  std::vector<Violation> out;
  auto flag = [&out](const std::string& id, const std::string& what) {
    out.push_back(Violation{id, what});
  };

  std::unordered_set<std::string> cycle_ids;
  for (const Cycle& c : s.cycles) {
    if (!cycle_ids.insert(c.id).second) flag(c.id, "duplicate cycle id");
    if (c.label.empty()) flag(c.id, "empty cycle label");
  }

  std::unordered_map<std::string, const Submission*> submissions;
  for (const Submission& sub : s.submissions) {
    if (!submissions.emplace(sub.id, &sub).second) flag(sub.id, "duplicate submission id");
    if (!cycle_ids.count(sub.cycle_id)) flag(sub.id, "unresolved cycle reference");
    if (sub.author_ids.empty()) flag(sub.id, "empty author set");
    bool accepted = sub.acceptance == Acceptance::accepted;
    if (accepted && !sub.venue.has_value()) flag(sub.id, "accepted submission without venue");
    if (!accepted && sub.venue.has_value()) flag(sub.id, "venue set on non-accepted submission");
  }

  std::unordered_set<std::string> review_ids;
  std::unordered_set<std::string> reviewer_ids_seen;
  for (const ReviewRecord& r : s.reviews) {
    if (!review_ids.insert(r.id).second) flag(r.id, "duplicate review id");
    if (!cycle_ids.count(r.cycle_id)) flag(r.id, "unresolved cycle reference");
    auto sub_it = submissions.find(r.submission_id);
    if (sub_it == submissions.end()) {
      flag(r.id, "unresolved submission reference");
    } else if (sub_it->second->cycle_id != r.cycle_id) {
      flag(r.id, "cycle mismatch");
    }
    if (!r.overall.in_range()) flag(r.id, "ScoreHalf out of range");
    if (!in_1_to_5(r.confidence)) flag(r.id, "confidence out of range");
    if (!in_1_to_5(r.replicability)) flag(r.id, "replicability out of range");
    if (!in_1_to_5(r.datasets)) flag(r.id, "datasets out of range");
    if (!in_1_to_5(r.software)) flag(r.id, "software out of range");
    if (!in_1_to_5(r.author_identity_guess)) flag(r.id, "author_identity_guess out of range");

    const TextFields& t = r.text_fields;
    if (t.paper_summary.size() > TextFields::kDefaultLimit) flag(r.id, "paper_summary over limit");
    if (t.summary_of_strengths.size() > TextFields::kDefaultLimit)
      flag(r.id, "summary_of_strengths over limit");
    if (t.summary_of_weaknesses.size() > TextFields::kDefaultLimit)
      flag(r.id, "summary_of_weaknesses over limit");
    if (t.comments_suggestions_typos.size() > TextFields::kDefaultLimit)
      flag(r.id, "comments_suggestions_typos over limit");
    if (t.best_paper_justification.size() > TextFields::kDefaultLimit)
      flag(r.id, "best_paper_justification over limit");
    if (t.ethical_concerns.size() > TextFields::kEthicalConcernsLimit)
      flag(r.id, "ethical_concerns over limit");

    reviewer_ids_seen.insert(r.reviewer_id);
  }

  std::set<std::pair<std::string, std::string>> consent_keys;
  for (const ReviewerConsent& c : s.reviewer_consents) {
    std::string key = c.reviewer_id + "@" + c.cycle_id;
    if (!consent_keys.insert({c.reviewer_id, c.cycle_id}).second) {
      flag(key, "duplicate reviewer consent");
    }
    if (!cycle_ids.count(c.cycle_id)) flag(key, "unresolved cycle reference");
    if (c.attribution_requested && c.decision != ReviewerDecision::agree) {
      flag(key, "attribution requested without agreement");
    }
    bool no_response = c.decision == ReviewerDecision::no_response;
    if (no_response && c.decided_at.has_value()) flag(key, "timestamp on no_response consent");
    if (!no_response && !c.decided_at.has_value()) flag(key, "missing consent timestamp");
  }

  std::unordered_set<std::string> decided_submissions;
  for (const AuthorDecision& d : s.author_decisions) {
    if (!decided_submissions.insert(d.submission_id).second) {
      flag(d.submission_id, "duplicate author decision");
    }
    auto sub_it = submissions.find(d.submission_id);
    if (sub_it == submissions.end()) {
      flag(d.submission_id, "unresolved submission reference");
    } else if (d.decision != AuthorChoice::no_response &&
               sub_it->second->acceptance != Acceptance::accepted) {
      flag(d.submission_id, "author decision for non-accepted submission");
    }
  }

  if (s.identity_map.has_value()) {
    for (const std::string& reviewer : reviewer_ids_seen) {
      if (!s.identity_map->count(reviewer)) {
        flag(reviewer, "reviewer missing from identity map");
      }
    }
  }

  return out;
}

}  // namespace threeyes
