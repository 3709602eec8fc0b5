#include <json.hpp>

#include "threeyes/analytics/analytics.hpp"

namespace threeyes::analytics {

namespace {

using nlohmann::json;

json opt(const std::optional<double>& v) {
  if (!v.has_value()) return nullptr;
  return *v;
}

std::string bucket_label(std::size_t index) {
  int twice = int(index) + ScoreHalf::kMinTwice;
  std::string s = std::to_string(twice / 2);
  s += (twice % 2 == 0) ? ".0" : ".5";
  return s;
}

json row_to_json(const CountTableRow& row) {
  json j;
  j["subset"] = row.subset_label;
  j["n_submissions"] = row.n_submissions;
  j["n_reviews"] = row.n_reviews;
  j["n_reviewers"] = row.n_reviewers;
  j["reviewers_exact"] = row.reviewers_exact;
  j["reviews_per_submission"] = {
      {"mean", opt(row.reviews_per_submission_mean)},
      {"stdev", opt(row.reviews_per_submission_stdev)},
      {"estimated", row.reviews_per_submission_estimated},
  };
  j["reviews_per_reviewer"] = {
      {"mean", opt(row.reviews_per_reviewer_mean)},
      {"stdev", opt(row.reviews_per_reviewer_stdev)},
      {"bound", !row.reviewers_exact},
  };
  return j;
}

}  // namespace

std::string stats_to_json(const CampaignStats& stats) {
  json doc;
  doc["rows"] = json::array();
  for (const CountTableRow& row : stats.rows) doc["rows"].push_back(row_to_json(row));

  json hists = json::object();
  for (const auto& [label, hist] : stats.histograms) {
    json buckets = json::object();
    json normalized = json::object();
    auto norm = hist.normalized();
    for (std::size_t i = 0; i < hist.buckets.size(); ++i) {
      buckets[bucket_label(i)] = hist.buckets[i];
      normalized[bucket_label(i)] = norm[i];
    }
    hists[label] = {{"buckets", buckets}, {"total", hist.total}, {"normalized", normalized}};
  }
  doc["histograms"] = hists;

  json agreement = json::object();
  for (const auto& [label, a] : stats.agreement) {
    agreement[label] = {{"alpha", opt(a.alpha)},
                        {"n_units_used", a.n_units_used},
                        {"n_pairable_values", a.n_pairable_values},
                        {"metric", AgreementStats::kMetric}};
  }
  doc["agreement"] = agreement;

  json dispersion = json::object();
  for (const auto& [label, d] : stats.dispersion) dispersion[label] = opt(d);
  doc["dispersion"] = dispersion;

  json mean_overall = json::object();
  for (const auto& [label, m] : stats.mean_overall) mean_overall[label] = opt(m);
  doc["mean_overall"] = mean_overall;

  const BehaviorStats& b = stats.behavior;
  doc["behavior"] = {
      {"reviewer_response_rate", opt(b.reviewer_response_rate)},
      {"reviewer_decline_rate_among_responses", opt(b.reviewer_decline_rate_among_responses)},
      {"attribution_rate_among_donors", opt(b.attribution_rate_among_donors)},
      {"attribution_rate_among_responses", opt(b.attribution_rate_among_responses)},
      {"timing_before_first_review_rate", opt(b.timing_before_first_review_rate)},
      {"timing_after_last_review_rate", opt(b.timing_after_last_review_rate)},
      {"author_donation_rate", opt(b.author_donation_rate)},
      {"author_reviews_permission_rate_among_donors",
       opt(b.author_reviews_permission_rate_among_donors)},
      {"author_explicit_decline_rate", opt(b.author_explicit_decline_rate)},
      {"author_response_rate", opt(b.author_response_rate)},
  };

  return doc.dump(2) + "\n";
}

std::string plot_csv(const CampaignStats& stats) {
  std::string out = "bucket,count,subset\n";
  for (const auto& [label, hist] : stats.histograms) {
    for (std::size_t i = 0; i < hist.buckets.size(); ++i) {
      out += bucket_label(i);
      out += ",";
      out += std::to_string(hist.buckets[i]);
      out += ",";
      out += label;
      out += "\n";
    }
  }
  return out;
}

}  // namespace threeyes::analytics
