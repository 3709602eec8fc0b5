#include "threeyes/io/fixture.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "threeyes/core/validate.hpp"
#include "threeyes/io/record_json.hpp"
#include "threeyes/util/errors.hpp"
#include "threeyes/util/sha256.hpp"

namespace threeyes::io {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<fs::path> FixtureBundle::files() const {
  std::vector<fs::path> out = {dir / kCycles, dir / kSubmissions, dir / kReviews,
                               dir / kReviewerConsents, dir / kAuthorDecisions};
  if (fs::exists(dir / kIdentityMap)) out.push_back(dir / kIdentityMap);
  return out;
}

namespace {

void for_each_line(const fs::path& path, bool required,
                   const std::function<void(const json&, const std::string&)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (required) throw ParseError(path.string() + ": cannot open");
    return;
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::string context = path.filename().string() + ":" + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(context + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError(context + ": expected a JSON object");
    fn(j, context);
  }
}

struct CanonicalFiles {
  // file name -> full contents
  std::map<std::string, std::string> files;
};

std::string dump_line(const json& j) { return j.dump() + "\n"; }

CanonicalFiles serialize(const VenueSnapshot& s) {
  std::vector<Violation> violations = validate_snapshot(s);
  if (!violations.empty()) {
    throw IntegrityError("refusing to serialize invalid snapshot: " +
                         to_string(violations.front()));
  }

  CanonicalFiles out;

  auto sorted_by = [](auto records, auto key) {
    std::sort(records.begin(), records.end(),
              [&key](const auto& a, const auto& b) { return key(a) < key(b); });
    return records;
  };

  std::string buf;
  for (const Cycle& c : sorted_by(s.cycles, [](const Cycle& c) { return c.id; }))
    buf += dump_line(to_json(c));
  out.files[FixtureBundle::kCycles] = std::move(buf);

  buf.clear();
  for (const Submission& sub :
       sorted_by(s.submissions, [](const Submission& x) { return x.id; }))
    buf += dump_line(to_json(sub));
  out.files[FixtureBundle::kSubmissions] = std::move(buf);

  buf.clear();
  for (const ReviewRecord& r : sorted_by(s.reviews, [](const ReviewRecord& x) { return x.id; }))
    buf += dump_line(to_json(r));
  out.files[FixtureBundle::kReviews] = std::move(buf);

  buf.clear();
  for (const ReviewerConsent& c :
       sorted_by(s.reviewer_consents,
                 [](const ReviewerConsent& x) { return x.reviewer_id + "@" + x.cycle_id; }))
    buf += dump_line(to_json(c));
  out.files[FixtureBundle::kReviewerConsents] = std::move(buf);

  buf.clear();
  for (const AuthorDecision& d :
       sorted_by(s.author_decisions, [](const AuthorDecision& x) { return x.submission_id; }))
    buf += dump_line(to_json(d));
  out.files[FixtureBundle::kAuthorDecisions] = std::move(buf);

  if (s.identity_map.has_value()) {
    buf.clear();
    for (const auto& [reviewer, stable] : *s.identity_map) {
      buf += dump_line(json{{"reviewer_id", reviewer}, {"stable_id", stable}});
    }
    out.files[FixtureBundle::kIdentityMap] = std::move(buf);
  }
  return out;
}

}  // namespace

VenueSnapshot load_fixture(const fs::path& dir, std::vector<std::string>* warnings) {
  VenueSnapshot s;

  for_each_line(dir / FixtureBundle::kCycles, true,
                [&s](const json& j, const std::string& ctx) {
                  s.cycles.push_back(cycle_from_json(j, ctx));
                });
  for_each_line(dir / FixtureBundle::kSubmissions, true,
                [&s](const json& j, const std::string& ctx) {
                  s.submissions.push_back(submission_from_json(j, ctx));
                });
  for_each_line(dir / FixtureBundle::kReviews, true,
                [&s](const json& j, const std::string& ctx) {
                  s.reviews.push_back(review_from_json(j, ctx));
                });

  // Duplicate consent rows: platforms allow task re-submission, so the
  // latest decision by timestamp wins; earlier rows are only reported.
  std::map<std::pair<std::string, std::string>, ReviewerConsent> consents;
  for_each_line(dir / FixtureBundle::kReviewerConsents, true,
                [&](const json& j, const std::string& ctx) {
                  ReviewerConsent c = reviewer_consent_from_json(j, ctx);
                  auto key = std::make_pair(c.reviewer_id, c.cycle_id);
                  auto it = consents.find(key);
                  if (it == consents.end()) {
                    consents.emplace(key, std::move(c));
                    return;
                  }
                  Timestamp existing = it->second.decided_at.value_or(INT64_MIN);
                  Timestamp incoming = c.decided_at.value_or(INT64_MIN);
                  if (incoming >= existing) it->second = std::move(c);
                  if (warnings) {
                    warnings->push_back(ctx + ": duplicate consent for " + key.first + "@" +
                                        key.second + ", keeping latest by timestamp");
                  }
                });
  for (auto& [_, c] : consents) s.reviewer_consents.push_back(std::move(c));

  for_each_line(dir / FixtureBundle::kAuthorDecisions, true,
                [&s](const json& j, const std::string& ctx) {
                  s.author_decisions.push_back(author_decision_from_json(j, ctx));
                });

  if (fs::exists(dir / FixtureBundle::kIdentityMap)) {
    std::map<std::string, std::string> map;
    for_each_line(dir / FixtureBundle::kIdentityMap, false,
                  [&map](const json& j, const std::string& ctx) {
                    auto reviewer = j.find("reviewer_id");
                    auto stable = j.find("stable_id");
                    if (reviewer == j.end() || stable == j.end() || !reviewer->is_string() ||
                        !stable->is_string()) {
                      throw ParseError(ctx + ": expected reviewer_id and stable_id strings");
                    }
                    map[reviewer->get<std::string>()] = stable->get<std::string>();
                  });
    s.identity_map = std::move(map);
  }

  std::vector<Violation> violations = validate_snapshot(s);
  if (!violations.empty()) {
    std::string msg = "fixture at " + dir.string() + " failed validation:";
    std::size_t shown = std::min<std::size_t>(violations.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) msg += "\n  " + to_string(violations[i]);
    if (violations.size() > shown) {
      msg += "\n  (+" + std::to_string(violations.size() - shown) + " more)";
    }
    throw IntegrityError(msg);
  }
  return s;
}

FixtureBundle save_fixture(const VenueSnapshot& s, const fs::path& dir) {
  CanonicalFiles canonical = serialize(s);
  fs::create_directories(dir);
  for (const auto& [name, contents] : canonical.files) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out.write(contents.data(), std::streamsize(contents.size()));
  }
  return FixtureBundle{dir};
}

VenueSnapshot canonicalize(VenueSnapshot s) {
  std::sort(s.cycles.begin(), s.cycles.end(),
            [](const Cycle& a, const Cycle& b) { return a.id < b.id; });
  std::sort(s.submissions.begin(), s.submissions.end(),
            [](const Submission& a, const Submission& b) { return a.id < b.id; });
  std::sort(s.reviews.begin(), s.reviews.end(),
            [](const ReviewRecord& a, const ReviewRecord& b) { return a.id < b.id; });
  std::sort(s.reviewer_consents.begin(), s.reviewer_consents.end(),
            [](const ReviewerConsent& a, const ReviewerConsent& b) {
              return a.reviewer_id + "@" + a.cycle_id < b.reviewer_id + "@" + b.cycle_id;
            });
  std::sort(s.author_decisions.begin(), s.author_decisions.end(),
            [](const AuthorDecision& a, const AuthorDecision& b) {
              return a.submission_id < b.submission_id;
            });
  return s;
}

std::string snapshot_hash(const VenueSnapshot& s) {
  CanonicalFiles canonical = serialize(s);
  util::Sha256 h;
  for (const auto& [name, contents] : canonical.files) {
    h.update(name);
    h.update("\n");
    h.update(contents);
  }
  return h.hex_digest();
}

}  // namespace threeyes::io
