#include "threeyes/exporter/exporter.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "threeyes/analytics/analytics.hpp"
#include "threeyes/io/fixture.hpp"
#include "threeyes/util/errors.hpp"
#include "threeyes/util/sha256.hpp"

namespace threeyes::exporter {

namespace fs = std::filesystem;
using nlohmann::json;
using workflow::ArtifactKind;
using workflow::Assignment;

std::string release_token(const std::string& release_id, const std::string& kind,
                          const std::string& source_id) {
  return util::sha256_hex(release_id + "/" + kind + "/" + source_id).substr(0, 16);
}

namespace {

json opt_json(const std::optional<double>& v) {
  if (!v.has_value()) return nullptr;
  return *v;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(contents.data(), std::streamsize(contents.size()));
}

/// Every identifier the source snapshot uses; none may appear in a release.
std::vector<std::string> collect_source_ids(const VenueSnapshot& s) {
  std::vector<std::string> ids;
  for (const Cycle& c : s.cycles) ids.push_back(c.id);
  for (const Submission& sub : s.submissions) {
    ids.push_back(sub.id);
    for (const std::string& a : sub.author_ids) ids.push_back(a);
  }
  for (const ReviewRecord& r : s.reviews) {
    ids.push_back(r.id);
    ids.push_back(r.reviewer_id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

void scan_for_leaks(const std::string& buffer, const std::vector<std::string>& source_ids,
                    const std::vector<std::string>& display_names, const char* where) {
  for (const std::string& id : source_ids) {
    if (!id.empty() && buffer.find(id) != std::string::npos) {
      throw LeakError(std::string(where) + " would leak source id '" + id + "'");
    }
  }
  for (const std::string& name : display_names) {
    if (!name.empty() && buffer.find(name) != std::string::npos) {
      throw LeakError(std::string(where) + " would leak display name '" + name + "'");
    }
  }
}

}  // namespace

std::string ExportManifest::to_json_string() const {
  json j;
  j["release_id"] = release_id;
  j["created_at"] = created_at;
  j["counts"] = {{"reviews", reviews_exported}, {"drafts", drafts_exported}};
  j["source_tier_counts"] = source_tier_counts;
  j["license_id"] = license_id;
  j["notice_hash"] = notice_hash;
  j["agreement_text_hashes"] = agreement_text_hashes;
  j["tombstones"] = json::array();
  for (const Tombstone& t : tombstones) {
    j["tombstones"].push_back(
        {{"release_id", t.release_id}, {"token", t.token}, {"kind", t.kind}});
  }
  j["source_snapshot_hash"] = source_snapshot_hash;
  return j.dump(2) + "\n";
}

ExportManifest ExportManifest::from_json_string(const std::string& text) {
  json j = json::parse(text);
  ExportManifest m;
  m.release_id = j.at("release_id").get<std::string>();
  m.created_at = j.at("created_at").get<Timestamp>();
  m.reviews_exported = j.at("counts").at("reviews").get<long>();
  m.drafts_exported = j.at("counts").at("drafts").get<long>();
  for (const auto& [k, v] : j.at("source_tier_counts").items()) {
    m.source_tier_counts[k] = v.get<long>();
  }
  m.license_id = j.at("license_id").get<std::string>();
  m.notice_hash = j.at("notice_hash").get<std::string>();
  for (const auto& [k, v] : j.at("agreement_text_hashes").items()) {
    m.agreement_text_hashes[k] = v.get<std::string>();
  }
  for (const json& t : j.at("tombstones")) {
    m.tombstones.push_back(Tombstone{t.at("release_id").get<std::string>(),
                                     t.at("token").get<std::string>(),
                                     t.at("kind").get<std::string>()});
  }
  m.source_snapshot_hash = j.at("source_snapshot_hash").get<std::string>();
  return m;
}

ExportManifest ExportManifest::load(const fs::path& path) {
  return from_json_string(read_file(path));
}

ExportManifest export_public(const VenueSnapshot& s, const std::vector<Assignment>& assignments,
                             const licensing::GrantStore& grants,
                             const licensing::AttributionRegistry& registry,
                             const ExportOptions& options, const fs::path& out_dir) {
  if (options.release_id.empty()) throw ConfigError("export: release_id required");

  std::unordered_map<std::string, const Submission*> submissions;
  for (const Submission& sub : s.submissions) submissions.emplace(sub.id, &sub);
  std::unordered_map<std::string, std::string> cycle_labels;
  for (const Cycle& c : s.cycles) cycle_labels.emplace(c.id, c.label);

  std::unordered_set<std::string> withdrawn(options.withdrawn.begin(), options.withdrawn.end());

  auto token = [&options](const std::string& kind, const std::string& id) {
    return release_token(options.release_id, kind, id);
  };

  // Select records under the configured policy; the guard below re-checks
  // that the policy itself is sound.
  std::vector<std::pair<std::string, json>> records;  // sort key -> record
  ExportManifest manifest;
  manifest.release_id = options.release_id;
  manifest.created_at = options.clock_ms;
  manifest.source_snapshot_hash = io::snapshot_hash(s);
  manifest.agreement_text_hashes = licensing::resource_hashes();

  std::unordered_map<std::string, const ReviewRecord*> reviews;
  for (const ReviewRecord& r : s.reviews) reviews.emplace(r.id, &r);

  for (const Assignment& a : assignments) {
    manifest.source_tier_counts[to_string(a.tier)] += 1;
    if (!options.tiers.count(a.tier)) continue;
    if (withdrawn.count(a.artifact_id)) continue;

    if (a.tier != Tier::Public3Y) {
      throw LeakError("export policy admits non-public tier '" +
                      std::string(to_string(a.tier)) + "' (artifact '" + a.artifact_id + "')");
    }
    if (grants.find(a.artifact_id) == nullptr) {
      throw TierError("no license grant recorded for exported artifact '" + a.artifact_id + "'");
    }

    if (a.kind == ArtifactKind::review) {
      const ReviewRecord* r = reviews.at(a.artifact_id);
      json rec;
      rec["kind"] = "review";
      rec["token"] = options.redact_ids ? token("review", r->id) : r->id;
      rec["submission"] =
          options.redact_ids ? token("submission", r->submission_id) : r->submission_id;
      rec["reviewer"] = options.redact_ids ? token("reviewer", r->reviewer_id) : r->reviewer_id;
      rec["cycle"] = cycle_labels.at(r->cycle_id);
      rec["text_fields"] = {
          {"paper_summary", r->text_fields.paper_summary},
          {"summary_of_strengths", r->text_fields.summary_of_strengths},
          {"summary_of_weaknesses", r->text_fields.summary_of_weaknesses},
          {"comments_suggestions_typos", r->text_fields.comments_suggestions_typos},
          {"best_paper_justification", r->text_fields.best_paper_justification},
          {"ethical_concerns", r->text_fields.ethical_concerns},
      };
      rec["overall"] = r->overall.value();
      rec["confidence"] = r->confidence;
      rec["best_paper"] = to_string(r->best_paper);
      rec["replicability"] = r->replicability;
      rec["datasets"] = r->datasets;
      rec["software"] = r->software;
      rec["author_identity_guess"] = r->author_identity_guess;
      rec["submitted_at"] = r->submitted_at;
      records.emplace_back("review:" + rec["token"].get<std::string>(), std::move(rec));
      manifest.reviews_exported += 1;
    } else {
      const Submission* sub = submissions.at(a.artifact_id);
      json rec;
      rec["kind"] = "draft";
      rec["token"] = options.redact_ids ? token("draft", sub->id) : sub->id;
      rec["submission"] = options.redact_ids ? token("submission", sub->id) : sub->id;
      rec["cycle"] = cycle_labels.at(sub->cycle_id);
      if (sub->venue) rec["venue"] = *sub->venue;
      if (sub->draft_ref) rec["draft_ref"] = *sub->draft_ref;
      records.emplace_back("draft:" + rec["token"].get<std::string>(), std::move(rec));
      manifest.drafts_exported += 1;
    }
  }

  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string public_jsonl;
  for (const auto& [_, rec] : records) public_jsonl += rec.dump() + "\n";

  // Withdrawals of records that appeared in the prior release become
  // tombstones, named by their token in that release; older tombstones are
  // carried forward. Prior bundles themselves are never touched.
  if (options.prior_release_dir.has_value()) {
    ExportManifest prior = ExportManifest::load(*options.prior_release_dir / "MANIFEST.json");
    manifest.tombstones = prior.tombstones;
    std::string prior_public = read_file(*options.prior_release_dir / "public.jsonl");
    std::unordered_set<std::string> prior_tokens;
    std::istringstream lines(prior_public);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.empty()) continue;
      json rec = json::parse(line);
      prior_tokens.insert(rec.at("token").get<std::string>());
    }
    for (const std::string& id : options.withdrawn) {
      for (const char* kind : {"review", "draft", "submission"}) {
        std::string prior_token = release_token(prior.release_id, kind, id);
        if (prior_tokens.count(prior_token)) {
          manifest.tombstones.push_back(Tombstone{prior.release_id, prior_token, kind});
        }
      }
    }
  } else if (!options.withdrawn.empty()) {
    // Withdrawal before any release: the records are simply absent.
  }

  std::string notice =
      licensing::build_copyright_notice(options.notice_year, registry.display_names()) + "\n";
  manifest.notice_hash = util::sha256_hex(notice);
  std::string manifest_text = manifest.to_json_string();

  // The guard runs over the final buffers, before anything touches disk.
  std::vector<std::string> source_ids = collect_source_ids(s);
  std::vector<std::string> display_names = registry.display_names();
  scan_for_leaks(public_jsonl, source_ids, display_names, "public.jsonl");
  scan_for_leaks(manifest_text, source_ids, display_names, "MANIFEST.json");
  scan_for_leaks(notice, source_ids, {}, "NOTICE.txt");

  fs::create_directories(out_dir);
  write_file(out_dir / "public.jsonl", public_jsonl);
  write_file(out_dir / "NOTICE.txt", notice);
  write_file(out_dir / "LICENSE", std::string(licensing::cc_license_text()));
  write_file(out_dir / "MANIFEST.json", manifest_text);
  return manifest;
}

namespace {

const std::set<std::string>& allowed_passthrough() {
  static const std::set<std::string> allowed = {
      "confidence", "replicability", "datasets", "software", "author_identity_guess"};
  return allowed;
}

int int_field(const ReviewRecord& r, const std::string& field) {
  if (field == "confidence") return r.confidence;
  if (field == "replicability") return r.replicability;
  if (field == "datasets") return r.datasets;
  if (field == "software") return r.software;
  return r.author_identity_guess;
}

}  // namespace

void export_protected_report(const VenueSnapshot& s, const std::vector<Assignment>& assignments,
                             const ProtectedReportOptions& options, const fs::path& out_path) {
  for (const std::string& field : options.passthrough_fields) {
    if (!allowed_passthrough().count(field)) {
      throw LeakError("protected report must not carry field '" + field + "'");
    }
  }

  json doc;
  doc["kind"] = "protected_report";
  doc["suppression_floor"] = options.suppression_floor;
  json subsets = json::object();

  for (const char* label : {"1y", "2y"}) {
    analytics::TierFilter filter = analytics::tier_filter_from_token(label);
    std::vector<const ReviewRecord*> reviews = analytics::filter_reviews(s, assignments, filter);

    json entry;
    if (long(reviews.size()) < options.suppression_floor) {
      entry["suppressed"] = true;
      entry["n_reviews"] = long(reviews.size());
      subsets[label] = entry;
      continue;
    }

    analytics::CountTableRow row = analytics::count_table(s, assignments, filter, label);
    entry["n_submissions"] = row.n_submissions;
    entry["n_reviews"] = row.n_reviews;
    entry["n_reviewers"] = row.n_reviewers;
    entry["reviewers_exact"] = row.reviewers_exact;
    entry["reviews_per_submission_mean"] = opt_json(row.reviews_per_submission_mean);
    entry["reviews_per_submission_stdev"] = opt_json(row.reviews_per_submission_stdev);
    entry["reviews_per_reviewer_mean"] = opt_json(row.reviews_per_reviewer_mean);
    entry["reviews_per_reviewer_stdev"] = opt_json(row.reviews_per_reviewer_stdev);

    analytics::ScoreHistogram hist = analytics::score_histogram(reviews);
    json buckets = json::object();
    for (std::size_t i = 0; i < hist.buckets.size(); ++i) {
      int twice = int(i) + ScoreHalf::kMinTwice;
      std::string key = std::to_string(twice / 2) + (twice % 2 == 0 ? ".0" : ".5");
      // Small-cell suppression: nonzero cells below the floor are hidden.
      if (hist.buckets[i] > 0 && hist.buckets[i] < options.suppression_floor) {
        buckets[key] = nullptr;
      } else {
        buckets[key] = hist.buckets[i];
      }
    }
    entry["score_histogram"] = {{"buckets", buckets}, {"total", hist.total}};

    analytics::ScoreUnits units = analytics::units_from_reviews(reviews);
    analytics::AgreementStats agreement = analytics::krippendorff_alpha_ordinal(units);
    entry["agreement"] = {{"alpha", opt_json(agreement.alpha)},
                          {"n_units_used", agreement.n_units_used},
                          {"n_pairable_values", agreement.n_pairable_values},
                          {"metric", analytics::AgreementStats::kMetric}};
    entry["score_dispersion"] = opt_json(analytics::per_paper_score_dispersion(units));

    for (const std::string& field : options.passthrough_fields) {
      json values = json::array();
      for (const ReviewRecord* r : reviews) values.push_back(int_field(*r, field));
      entry["passthrough"][field] = values;
    }
    subsets[label] = entry;
  }
  doc["subsets"] = subsets;

  std::string text = doc.dump(2) + "\n";

  // No ids and no free text may survive into the report.
  std::vector<std::string> source_ids = collect_source_ids(s);
  scan_for_leaks(text, source_ids, {}, "protected report");
  for (const ReviewRecord& r : s.reviews) {
    for (const std::string* t :
         {&r.text_fields.paper_summary, &r.text_fields.summary_of_strengths,
          &r.text_fields.summary_of_weaknesses, &r.text_fields.comments_suggestions_typos,
          &r.text_fields.best_paper_justification, &r.text_fields.ethical_concerns}) {
      if (!t->empty() && text.find(*t) != std::string::npos) {
        throw LeakError("protected report would leak review text");
      }
    }
  }

  fs::create_directories(out_path.parent_path().empty() ? "." : out_path.parent_path());
  write_file(out_path, text);
}

}  // namespace threeyes::exporter
