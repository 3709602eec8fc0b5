#include "threeyes/workflow/workflow.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "threeyes/core/validate.hpp"
#include "threeyes/util/errors.hpp"

namespace threeyes::workflow {

const char* to_string(ArtifactKind k) {
  return k == ArtifactKind::review ? "review" : "draft";
}

Tier classify_review(const WorkflowInputs& in) {
  if (in.reviewer_decision != ReviewerDecision::agree) {
    return Tier::Excluded;
  }
  if (in.acceptance != Acceptance::accepted) {
    return Tier::Protected1Y;
  }
  switch (in.author_decision) {
    case AuthorChoice::paper_and_reviews:
    case AuthorChoice::paper_and_reviews_all_versions:
      return Tier::Public3Y;
    case AuthorChoice::no_response:
    case AuthorChoice::decline:
    case AuthorChoice::paper_only:
      return Tier::Protected2Y;
  }
  return Tier::Protected2Y;
}

Tier classify_draft(Acceptance acceptance, AuthorChoice author_decision) {
  if (acceptance != Acceptance::accepted) {
    return Tier::Excluded;
  }
  switch (author_decision) {
    case AuthorChoice::paper_only:
    case AuthorChoice::paper_and_reviews:
    case AuthorChoice::paper_and_reviews_all_versions:
      return Tier::Public3Y;
    case AuthorChoice::no_response:
    case AuthorChoice::decline:
      return Tier::Excluded;
  }
  return Tier::Excluded;
}

namespace {

struct JoinedSnapshot {
  std::unordered_map<std::string, const Submission*> submissions;
  std::unordered_map<std::string, ReviewerDecision> consents;  // reviewer@cycle
  std::unordered_map<std::string, AuthorChoice> author_choices;

  explicit JoinedSnapshot(const VenueSnapshot& s) {
    for (const Submission& sub : s.submissions) submissions.emplace(sub.id, &sub);
    for (const ReviewerConsent& c : s.reviewer_consents) {
      consents.emplace(c.reviewer_id + "@" + c.cycle_id, c.decision);
    }
    for (const AuthorDecision& d : s.author_decisions) {
      author_choices.emplace(d.submission_id, d.decision);
    }
  }

  WorkflowInputs inputs_for(const ReviewRecord& r) const {
    WorkflowInputs in;
    auto c = consents.find(r.reviewer_id + "@" + r.cycle_id);
    in.reviewer_decision = c == consents.end() ? ReviewerDecision::no_response : c->second;
    const Submission* sub = submissions.at(r.submission_id);
    in.acceptance = sub->acceptance;
    auto a = author_choices.find(r.submission_id);
    in.author_decision = a == author_choices.end() ? AuthorChoice::no_response : a->second;
    return in;
  }

  Acceptance acceptance_of(const std::string& submission_id) const {
    return submissions.at(submission_id)->acceptance;
  }

  AuthorChoice author_choice_of(const std::string& submission_id) const {
    auto a = author_choices.find(submission_id);
    return a == author_choices.end() ? AuthorChoice::no_response : a->second;
  }
};

std::vector<std::string> review_derivation(const WorkflowInputs& in) {
  return {
      std::string("reviewer_decision=") + to_string(in.reviewer_decision),
      std::string("acceptance=") + to_string(in.acceptance),
      std::string("author_decision=") + to_string(in.author_decision),
  };
}

std::vector<Assignment> run_workflow_unchecked(const VenueSnapshot& s,
                                               const JoinedSnapshot& join) {
  std::vector<Assignment> out;
  out.reserve(s.reviews.size() + s.submissions.size());

  for (const ReviewRecord& r : s.reviews) {
    WorkflowInputs in = join.inputs_for(r);
    out.push_back(Assignment{r.id, ArtifactKind::review, classify_review(in),
                             review_derivation(in)});
  }
  for (const Submission& sub : s.submissions) {
    AuthorChoice choice = join.author_choice_of(sub.id);
    Tier tier = classify_draft(sub.acceptance, choice);
    out.push_back(Assignment{
        sub.id, ArtifactKind::draft, tier,
        {std::string("acceptance=") + to_string(sub.acceptance),
         std::string("author_decision=") + to_string(choice)}});
  }

  std::sort(out.begin(), out.end(), [](const Assignment& a, const Assignment& b) {
    if (a.kind != b.kind) return a.kind == ArtifactKind::review;
    return a.artifact_id < b.artifact_id;
  });
  return out;
}

void ensure_valid(const VenueSnapshot& s) {
  std::vector<Violation> violations = validate_snapshot(s);
  if (!violations.empty()) {
    std::string msg = "snapshot failed validation: " + to_string(violations.front());
    if (violations.size() > 1) {
      msg += " (+" + std::to_string(violations.size() - 1) + " more)";
    }
    throw IntegrityError(msg);
  }
}

void check_acyclic(const ResubmissionMap& link) {
  // Colors: 0 unvisited, 1 on stack, 2 done.
  std::unordered_map<std::string, int> color;
  std::function<void(const std::string&)> visit = [&](const std::string& id) {
    int& c = color[id];
    if (c == 1) throw CycleError("resubmission map contains a loop through '" + id + "'");
    if (c == 2) return;
    c = 1;
    auto it = link.find(id);
    if (it != link.end()) {
      for (const std::string& prev : it->second) visit(prev);
    }
    color[id] = 2;
  };
  for (const auto& [id, _] : link) visit(id);
}

}  // namespace

std::vector<Assignment> run_workflow(const VenueSnapshot& s) {
  ensure_valid(s);
  return run_workflow_unchecked(s, JoinedSnapshot(s));
}

std::vector<Assignment> apply_previous_versions(const VenueSnapshot& s,
                                                const ResubmissionMap& link) {
  ensure_valid(s);
  check_acyclic(link);

  JoinedSnapshot join(s);
  std::vector<Assignment> out = run_workflow_unchecked(s, join);

  std::unordered_map<std::string, Assignment*> by_key;
  for (Assignment& a : out) {
    by_key.emplace(std::string(to_string(a.kind)) + ":" + a.artifact_id, &a);
  }

  std::unordered_map<std::string, std::vector<const ReviewRecord*>> reviews_by_submission;
  for (const ReviewRecord& r : s.reviews) {
    reviews_by_submission[r.submission_id].push_back(&r);
  }

  // Transitive earlier versions of one submission.
  auto collect_versions = [&link](const std::string& root) {
    std::vector<std::string> acc;
    std::unordered_set<std::string> seen;
    std::vector<std::string> stack{root};
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      auto it = link.find(cur);
      if (it == link.end()) continue;
      for (const std::string& prev : it->second) {
        if (seen.insert(prev).second) {
          acc.push_back(prev);
          stack.push_back(prev);
        }
      }
    }
    return acc;
  };

  for (const Submission& current : s.submissions) {
    AuthorChoice choice = join.author_choice_of(current.id);
    if (choice != AuthorChoice::paper_and_reviews_all_versions) continue;

    // Tier ceilings set by the current version; promotions never exceed them.
    Tier draft_ceiling = classify_draft(current.acceptance, choice);
    Tier review_ceiling = classify_review(
        WorkflowInputs{ReviewerDecision::agree, current.acceptance, choice});
    std::string via = "promoted_via=" + current.id + "(all_versions)";

    for (const std::string& prev_id : collect_versions(current.id)) {
      if (!join.submissions.count(prev_id)) continue;

      Assignment* draft = by_key.at("draft:" + prev_id);
      Tier promoted = std::min(draft_ceiling,
                               classify_draft(current.acceptance, choice));
      if (promoted > draft->tier) {
        draft->tier = promoted;
        draft->derivation.push_back(via);
      }

      auto rit = reviews_by_submission.find(prev_id);
      if (rit == reviews_by_submission.end()) continue;
      for (const ReviewRecord* r : rit->second) {
        WorkflowInputs in = join.inputs_for(*r);
        // Only reviewer-consented reviews ride along; the 1Y gate stands.
        if (in.reviewer_decision != ReviewerDecision::agree) continue;
        Tier target = std::min(
            review_ceiling,
            classify_review(WorkflowInputs{in.reviewer_decision, current.acceptance, choice}));
        Assignment* assignment = by_key.at("review:" + r->id);
        if (target > assignment->tier) {
          assignment->tier = target;
          assignment->derivation.push_back(via);
        }
      }
    }
  }

  return out;
}

}  // namespace threeyes::workflow
