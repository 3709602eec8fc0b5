#include "threeyes/core/types.hpp"

#include <cmath>
#include <stdexcept>

namespace threeyes {

const char* to_string(Tier t) {
  switch (t) {
    case Tier::Excluded: return "excluded";
    case Tier::Protected1Y: return "protected1y";
    case Tier::Protected2Y: return "protected2y";
    case Tier::Public3Y: return "public3y";
  }
  return "?";
}

const char* to_string(ReviewerDecision d) {
  switch (d) {
    case ReviewerDecision::agree: return "agree";
    case ReviewerDecision::decline: return "decline";
    case ReviewerDecision::no_response: return "no_response";
  }
  return "?";
}

const char* to_string(Acceptance a) {
  switch (a) {
    case Acceptance::accepted: return "accepted";
    case Acceptance::rejected: return "rejected";
    case Acceptance::pending: return "pending";
  }
  return "?";
}

const char* to_string(AuthorChoice c) {
  switch (c) {
    case AuthorChoice::no_response: return "no_response";
    case AuthorChoice::decline: return "decline";
    case AuthorChoice::paper_only: return "paper_only";
    case AuthorChoice::paper_and_reviews: return "paper_and_reviews";
    case AuthorChoice::paper_and_reviews_all_versions: return "paper_and_reviews_all_versions";
  }
  return "?";
}

const char* to_string(BestPaper b) {
  switch (b) {
    case BestPaper::yes: return "yes";
    case BestPaper::maybe: return "maybe";
    case BestPaper::no: return "no";
  }
  return "?";
}

namespace {

[[noreturn]] void bad_enum(const char* what, const std::string& s) {
  throw std::invalid_argument(std::string("unknown ") + what + " value '" + s + "'");
}

}  // namespace

Tier tier_from_string(const std::string& s) {
  if (s == "excluded") return Tier::Excluded;
  if (s == "protected1y") return Tier::Protected1Y;
  if (s == "protected2y") return Tier::Protected2Y;
  if (s == "public3y") return Tier::Public3Y;
  bad_enum("tier", s);
}

ReviewerDecision reviewer_decision_from_string(const std::string& s) {
  if (s == "agree") return ReviewerDecision::agree;
  if (s == "decline") return ReviewerDecision::decline;
  if (s == "no_response") return ReviewerDecision::no_response;
  bad_enum("reviewer decision", s);
}

Acceptance acceptance_from_string(const std::string& s) {
  if (s == "accepted") return Acceptance::accepted;
  if (s == "rejected") return Acceptance::rejected;
  if (s == "pending") return Acceptance::pending;
  bad_enum("acceptance", s);
}

AuthorChoice author_choice_from_string(const std::string& s) {
  if (s == "no_response") return AuthorChoice::no_response;
  if (s == "decline") return AuthorChoice::decline;
  if (s == "paper_only") return AuthorChoice::paper_only;
  if (s == "paper_and_reviews") return AuthorChoice::paper_and_reviews;
  if (s == "paper_and_reviews_all_versions") return AuthorChoice::paper_and_reviews_all_versions;
  bad_enum("author choice", s);
}

BestPaper best_paper_from_string(const std::string& s) {
  if (s == "yes") return BestPaper::yes;
  if (s == "maybe") return BestPaper::maybe;
  if (s == "no") return BestPaper::no;
  bad_enum("best paper answer", s);
}

ScoreHalf encode_overall(double score) {
  double doubled = score * 2.0;
  double rounded = std::round(doubled);
  if (std::abs(doubled - rounded) > 1e-9) {
    throw std::invalid_argument("off-lattice score: " + std::to_string(score));
  }
  int twice = int(rounded);
  if (twice < ScoreHalf::kMinTwice || twice > ScoreHalf::kMaxTwice) {
    throw std::invalid_argument("score out of [1,5]: " + std::to_string(score));
  }
  return ScoreHalf{twice};
}

}  // namespace threeyes
