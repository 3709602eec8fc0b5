// Small helpers for building valid snapshots in tests.
#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "threeyes/core/types.hpp"
#include "threeyes/core/validate.hpp"

namespace test_support {

using namespace threeyes;

constexpr Timestamp kBaseTime = 1631000000000LL;  // mid-September 2021

class SnapshotBuilder {
 public:
  SnapshotBuilder() { cycle("cyc-01", "2021-09"); }

  SnapshotBuilder& cycle(const std::string& id, const std::string& label) {
    s.cycles.push_back(Cycle{id, label});
    return *this;
  }

  Submission& submission(const std::string& id, Acceptance acceptance = Acceptance::pending,
                         const std::string& cycle_id = "cyc-01") {
    Submission sub;
    sub.id = id;
    sub.cycle_id = cycle_id;
    sub.author_ids = {"aut-" + id};
    sub.draft_ref = "blob:" + id;
    sub.acceptance = acceptance;
    if (acceptance == Acceptance::accepted) sub.venue = "venue-x";
    s.submissions.push_back(std::move(sub));
    return s.submissions.back();
  }

  ReviewRecord& review(const std::string& id, const std::string& submission_id,
                       const std::string& reviewer_id, int twice = 6,
                       Timestamp at = kBaseTime) {
    ReviewRecord r;
    r.id = id;
    r.submission_id = submission_id;
    r.reviewer_id = reviewer_id;
    for (const Submission& sub : s.submissions) {
      if (sub.id == submission_id) r.cycle_id = sub.cycle_id;
    }
    if (r.cycle_id.empty()) r.cycle_id = "cyc-01";
    r.text_fields.paper_summary = "summary";
    r.text_fields.summary_of_strengths = "strengths";
    r.text_fields.summary_of_weaknesses = "weaknesses";
    r.text_fields.comments_suggestions_typos = "comments";
    r.overall = ScoreHalf{twice};
    r.confidence = 3;
    r.replicability = 3;
    r.datasets = 1;
    r.software = 1;
    r.author_identity_guess = 1;
    r.submitted_at = at;
    s.reviews.push_back(std::move(r));
    return s.reviews.back();
  }

  ReviewerConsent& consent(const std::string& reviewer_id, ReviewerDecision decision,
                           bool attribution = false, Timestamp at = kBaseTime - 1000,
                           const std::string& cycle_id = "cyc-01") {
    ReviewerConsent c;
    c.reviewer_id = reviewer_id;
    c.cycle_id = cycle_id;
    c.decision = decision;
    c.attribution_requested = attribution;
    if (decision != ReviewerDecision::no_response) c.decided_at = at;
    s.reviewer_consents.push_back(std::move(c));
    return s.reviewer_consents.back();
  }

  AuthorDecision& author(const std::string& submission_id, AuthorChoice choice,
                         Timestamp at = kBaseTime + 5000) {
    AuthorDecision d;
    d.submission_id = submission_id;
    d.decision = choice;
    if (choice != AuthorChoice::no_response) d.decided_at = at;
    s.author_decisions.push_back(std::move(d));
    return s.author_decisions.back();
  }

  VenueSnapshot s;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(contents.data(), std::streamsize(contents.size()));
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() /
             ("threeyes-test-" + tag + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace test_support
