#include "threeyes/analytics/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace threeyes::analytics {

namespace {

struct Moments {
  double mean = 0.0;
  double stdev = 0.0;  // population form
};

Moments moments(const std::vector<long>& xs) {
  Moments m;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (long x : xs) sum += double(x);
  m.mean = sum / double(xs.size());
  double sq = 0.0;
  for (long x : xs) sq += (double(x) - m.mean) * (double(x) - m.mean);
  m.stdev = std::sqrt(sq / double(xs.size()));
  return m;
}

}  // namespace

double round2(double v) { return std::round(v * 100.0) / 100.0; }

TierFilter tier_filter_from_token(const std::string& token) {
  if (token == "all") {
    return {Tier::Excluded, Tier::Protected1Y, Tier::Protected2Y, Tier::Public3Y};
  }
  // Cumulative subsets mirror the 1Y/2Y/3Y reading: everything that passed
  // the corresponding gate.
  if (token == "1y") return {Tier::Protected1Y, Tier::Protected2Y, Tier::Public3Y};
  if (token == "2y") return {Tier::Protected2Y, Tier::Public3Y};
  if (token == "3y") return {Tier::Public3Y};
  return {tier_from_string(token)};  // throws for unknown names
}

std::vector<const ReviewRecord*> filter_reviews(
    const VenueSnapshot& s, const std::vector<workflow::Assignment>& assignments,
    const TierFilter& tiers) {
  std::unordered_map<std::string, Tier> review_tier;
  for (const workflow::Assignment& a : assignments) {
    if (a.kind == workflow::ArtifactKind::review) review_tier.emplace(a.artifact_id, a.tier);
  }
  std::vector<const ReviewRecord*> out;
  for (const ReviewRecord& r : s.reviews) {
    auto it = review_tier.find(r.id);
    if (it != review_tier.end() && tiers.count(it->second)) out.push_back(&r);
  }
  return out;
}

CountTableRow count_table(const VenueSnapshot& s,
                          const std::vector<workflow::Assignment>& assignments,
                          const TierFilter& tiers, const std::string& label) {
  CountTableRow row;
  row.subset_label = label;

  std::vector<const ReviewRecord*> reviews = filter_reviews(s, assignments, tiers);
  row.n_reviews = long(reviews.size());
  if (reviews.empty()) return row;

  std::unordered_map<std::string, long> per_submission;
  std::unordered_set<std::string> cycles;
  for (const ReviewRecord* r : reviews) {
    per_submission[r->submission_id] += 1;
    cycles.insert(r->cycle_id);
  }
  row.n_submissions = long(per_submission.size());

  // Reviewer identity: exact when a cross-cycle map exists or the subset
  // spans a single cycle; otherwise per-cycle rows give only bounds.
  const bool have_map = s.identity_map.has_value();
  const bool exact = have_map || cycles.size() <= 1;
  std::unordered_map<std::string, long> per_reviewer;
  for (const ReviewRecord* r : reviews) {
    std::string key = have_map ? s.identity_map->at(r->reviewer_id)
                               : (exact ? r->reviewer_id : r->reviewer_id + "@" + r->cycle_id);
    per_reviewer[key] += 1;
  }
  row.n_reviewers = long(per_reviewer.size());
  row.reviewers_exact = exact;

  std::vector<long> sub_counts;
  sub_counts.reserve(per_submission.size());
  for (const auto& [_, n] : per_submission) sub_counts.push_back(n);

  if (exact) {
    Moments ms = moments(sub_counts);
    row.reviews_per_submission_mean = ms.mean;
    row.reviews_per_submission_stdev = ms.stdev;

    std::vector<long> rev_counts;
    rev_counts.reserve(per_reviewer.size());
    for (const auto& [_, n] : per_reviewer) rev_counts.push_back(n);
    Moments mr = moments(rev_counts);
    row.reviews_per_reviewer_mean = mr.mean;
    row.reviews_per_reviewer_stdev = mr.stdev;
  } else {
    // Bound-only subset: per-cycle reviewer rows overcount people, so the
    // reviewer count is an upper bound and reviews-per-reviewer a lower
    // bound; reviews-per-submission is reported as total/total, flagged.
    row.reviews_per_submission_mean = double(row.n_reviews) / double(row.n_submissions);
    row.reviews_per_submission_estimated = true;
    row.reviews_per_reviewer_mean = double(row.n_reviews) / double(row.n_reviewers);
  }
  return row;
}

std::array<double, ScoreHalf::kLatticeSize> ScoreHistogram::normalized() const {
  std::array<double, ScoreHalf::kLatticeSize> out{};
  if (total == 0) return out;
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    out[i] = double(buckets[i]) / double(total);
  }
  return out;
}

ScoreHistogram score_histogram(const std::vector<const ReviewRecord*>& reviews) {
  ScoreHistogram h;
  for (const ReviewRecord* r : reviews) {
    h.buckets[std::size_t(r->overall.bucket())] += 1;
    h.total += 1;
  }
  return h;
}

ScoreHistogram score_histogram(const std::vector<ReviewRecord>& reviews) {
  std::vector<const ReviewRecord*> ptrs;
  ptrs.reserve(reviews.size());
  for (const ReviewRecord& r : reviews) ptrs.push_back(&r);
  return score_histogram(ptrs);
}

std::optional<double> total_variation(const ScoreHistogram& a, const ScoreHistogram& b) {
  if (a.total == 0 || b.total == 0) return std::nullopt;
  auto pa = a.normalized();
  auto pb = b.normalized();
  double sum = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) sum += std::abs(pa[i] - pb[i]);
  return sum / 2.0;
}

ScoreUnits units_from_reviews(const std::vector<const ReviewRecord*>& reviews) {
  std::map<std::string, std::vector<ScoreHalf>> grouped;
  for (const ReviewRecord* r : reviews) grouped[r->submission_id].push_back(r->overall);
  ScoreUnits units;
  units.reserve(grouped.size());
  for (auto& [id, scores] : grouped) units.emplace_back(id, std::move(scores));
  return units;
}

AgreementStats krippendorff_alpha_ordinal(const ScoreUnits& units) {
  AgreementStats stats;

  // Per-unit value counts; only units contributing pairs enter the matrix.
  std::vector<std::map<int, long>> unit_counts;
  for (const auto& [_, scores] : units) {
    if (scores.size() < 2) continue;
    std::map<int, long> counts;
    for (ScoreHalf v : scores) counts[v.twice_value] += 1;
    stats.n_units_used += 1;
    stats.n_pairable_values += long(scores.size());
    unit_counts.push_back(std::move(counts));
  }
  if (unit_counts.empty()) return stats;

  std::set<int> category_set;
  for (const auto& counts : unit_counts) {
    for (const auto& [v, _] : counts) category_set.insert(v);
  }
  std::vector<int> categories(category_set.begin(), category_set.end());
  const std::size_t n_cat = categories.size();
  std::unordered_map<int, std::size_t> index;
  for (std::size_t i = 0; i < n_cat; ++i) index.emplace(categories[i], i);

  // Coincidence matrix o(c,k): ordered within-unit pairs over m_u - 1.
  std::vector<std::vector<double>> o(n_cat, std::vector<double>(n_cat, 0.0));
  for (const auto& counts : unit_counts) {
    long m = 0;
    for (const auto& [_, cnt] : counts) m += cnt;
    const double denom = double(m) - 1.0;
    for (const auto& [vc, cc] : counts) {
      for (const auto& [vk, ck] : counts) {
        double pairs = (vc == vk) ? double(cc) * double(cc - 1) : double(cc) * double(ck);
        if (pairs > 0) o[index[vc]][index[vk]] += pairs / denom;
      }
    }
  }

  std::vector<double> marginal(n_cat, 0.0);
  double n = 0.0;
  for (std::size_t c = 0; c < n_cat; ++c) {
    for (std::size_t k = 0; k < n_cat; ++k) marginal[c] += o[c][k];
    n += marginal[c];
  }

  // Ordinal squared distance from cumulative marginals.
  std::vector<double> cumulative(n_cat + 1, 0.0);
  for (std::size_t c = 0; c < n_cat; ++c) cumulative[c + 1] = cumulative[c] + marginal[c];
  auto delta_sq = [&](std::size_t c, std::size_t k) {
    std::size_t lo = std::min(c, k), hi = std::max(c, k);
    double between = cumulative[hi + 1] - cumulative[lo];
    double d = between - (marginal[c] + marginal[k]) / 2.0;
    return d * d;
  };

  double d_observed = 0.0;
  double d_expected = 0.0;
  for (std::size_t c = 0; c < n_cat; ++c) {
    for (std::size_t k = 0; k < n_cat; ++k) {
      double dsq = delta_sq(c, k);
      d_observed += o[c][k] * dsq;
      d_expected += marginal[c] * marginal[k] * dsq;
    }
  }
  d_observed /= n;
  d_expected /= n * (n - 1.0);

  if (d_expected <= 0.0) return stats;  // single category: alpha undefined
  stats.alpha = 1.0 - d_observed / d_expected;
  return stats;
}

std::optional<double> per_paper_score_dispersion(const ScoreUnits& units) {
  double sum = 0.0;
  long used = 0;
  for (const auto& [_, scores] : units) {
    if (scores.size() < 2) continue;
    double mean = 0.0;
    for (ScoreHalf v : scores) mean += v.value();
    mean /= double(scores.size());
    double sq = 0.0;
    for (ScoreHalf v : scores) sq += (v.value() - mean) * (v.value() - mean);
    sum += std::sqrt(sq / double(scores.size()));
    used += 1;
  }
  if (used == 0) return std::nullopt;
  return sum / double(used);
}

BehaviorStats behavior_stats(const VenueSnapshot& s,
                             const std::vector<workflow::Assignment>& assignments) {
  (void)assignments;  // tiers are derivable from the same joins used here
  BehaviorStats b;

  struct PairInfo {
    Timestamp first_review = 0;
    Timestamp last_review = 0;
    long reviews = 0;
  };
  std::map<std::pair<std::string, std::string>, PairInfo> active;  // (reviewer, cycle)
  for (const ReviewRecord& r : s.reviews) {
    PairInfo& info = active[{r.reviewer_id, r.cycle_id}];
    if (info.reviews == 0) {
      info.first_review = info.last_review = r.submitted_at;
    } else {
      info.first_review = std::min(info.first_review, r.submitted_at);
      info.last_review = std::max(info.last_review, r.submitted_at);
    }
    info.reviews += 1;
  }

  long responses = 0, declines = 0, agrees = 0, attributions = 0;
  long timed_before = 0, timed_after = 0, timed_donors = 0;
  for (const ReviewerConsent& c : s.reviewer_consents) {
    auto it = active.find({c.reviewer_id, c.cycle_id});
    if (it == active.end()) continue;  // consent without reviews: not an active row
    if (c.decision == ReviewerDecision::no_response) continue;
    responses += 1;
    if (c.decision == ReviewerDecision::decline) {
      declines += 1;
      continue;
    }
    agrees += 1;
    if (c.attribution_requested) attributions += 1;
    if (c.decided_at.has_value()) {
      timed_donors += 1;
      if (*c.decided_at < it->second.first_review) {
        timed_before += 1;
      } else if (*c.decided_at > it->second.last_review) {
        timed_after += 1;
      }
    }
  }

  const long active_rows = long(active.size());
  auto rate = [](long num, long den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return double(num) / double(den);
  };
  b.reviewer_response_rate = rate(responses, active_rows);
  b.reviewer_decline_rate_among_responses = rate(declines, responses);
  b.attribution_rate_among_donors = rate(attributions, agrees);
  b.attribution_rate_among_responses = rate(attributions, responses);
  b.timing_before_first_review_rate = rate(timed_before, timed_donors);
  b.timing_after_last_review_rate = rate(timed_after, timed_donors);

  std::unordered_map<std::string, AuthorChoice> choices;
  for (const AuthorDecision& d : s.author_decisions) choices.emplace(d.submission_id, d.decision);

  long asked = 0, donated = 0, with_reviews = 0, declined = 0;
  for (const Submission& sub : s.submissions) {
    if (sub.acceptance != Acceptance::accepted) continue;
    asked += 1;
    auto it = choices.find(sub.id);
    AuthorChoice choice = it == choices.end() ? AuthorChoice::no_response : it->second;
    switch (choice) {
      case AuthorChoice::paper_and_reviews:
      case AuthorChoice::paper_and_reviews_all_versions:
        donated += 1;
        with_reviews += 1;
        break;
      case AuthorChoice::paper_only:
        donated += 1;
        break;
      case AuthorChoice::decline:
        declined += 1;
        break;
      case AuthorChoice::no_response:
        break;
    }
  }
  b.author_donation_rate = rate(donated, asked);
  b.author_reviews_permission_rate_among_donors = rate(with_reviews, donated);
  b.author_explicit_decline_rate = rate(declined, asked);
  b.author_response_rate = rate(donated + declined, asked);
  return b;
}

const CountTableRow* CampaignStats::find_row(const std::string& label) const {
  for (const CountTableRow& row : rows) {
    if (row.subset_label == label) return &row;
  }
  return nullptr;
}

CampaignStats compute_campaign_stats(const VenueSnapshot& s,
                                     const std::vector<workflow::Assignment>& assignments,
                                     const std::vector<std::string>& subset_tokens) {
  CampaignStats stats;
  for (const std::string& token : subset_tokens) {
    TierFilter filter = tier_filter_from_token(token);
    stats.rows.push_back(count_table(s, assignments, filter, token));

    std::vector<const ReviewRecord*> reviews = filter_reviews(s, assignments, filter);
    ScoreHistogram hist = score_histogram(reviews);
    if (hist.total > 0) {
      double sum = 0.0;
      for (std::size_t i = 0; i < hist.buckets.size(); ++i) {
        sum += double(hist.buckets[i]) * (double(i) + 2.0) / 2.0;
      }
      stats.mean_overall[token] = sum / double(hist.total);
    } else {
      stats.mean_overall[token] = std::nullopt;
    }
    stats.histograms[token] = hist;

    ScoreUnits units = units_from_reviews(reviews);
    stats.agreement[token] = krippendorff_alpha_ordinal(units);
    stats.dispersion[token] = per_paper_score_dispersion(units);
  }
  stats.behavior = behavior_stats(s, assignments);
  return stats;
}

}  // namespace threeyes::analytics
