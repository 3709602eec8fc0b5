#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "threeyes/core/types.hpp"
#include "threeyes/workflow/workflow.hpp"

namespace threeyes::analytics {

/// Subset of tiers a statistic is computed over.
using TierFilter = std::set<Tier>;

/// Named filters: "all", cumulative "1y"/"2y"/"3y", or a single tier name.
/// Throws std::invalid_argument for unknown tokens.
TierFilter tier_filter_from_token(const std::string& token);

/// One row of the selectivity table.
struct CountTableRow {
  std::string subset_label;
  long n_submissions = 0;  // submissions with >= 1 review in the filter
  long n_reviews = 0;
  long n_reviewers = 0;
  /// False when reviewer identities are only per-cycle (multi-cycle subset
  /// without an identity map): n_reviewers is then an upper bound and the
  /// per-reviewer mean a lower bound.
  bool reviewers_exact = true;

  std::optional<double> reviews_per_submission_mean;
  std::optional<double> reviews_per_submission_stdev;
  /// Set when the mean is only total/total (bound-only subsets).
  bool reviews_per_submission_estimated = false;

  std::optional<double> reviews_per_reviewer_mean;
  std::optional<double> reviews_per_reviewer_stdev;
};

struct ScoreHistogram {
  std::array<long, ScoreHalf::kLatticeSize> buckets{};
  long total = 0;

  std::array<double, ScoreHalf::kLatticeSize> normalized() const;
};

struct AgreementStats {
  std::optional<double> alpha;  // undefined when expected disagreement is 0
  long n_units_used = 0;        // units with >= 2 ratings
  long n_pairable_values = 0;   // ratings inside those units
  static constexpr const char* kMetric = "ordinal";
};

/// Donation-behavior rates; each is absent when its denominator is empty.
struct BehaviorStats {
  std::optional<double> reviewer_response_rate;
  std::optional<double> reviewer_decline_rate_among_responses;
  std::optional<double> attribution_rate_among_donors;
  std::optional<double> attribution_rate_among_responses;  // alternative denominator
  std::optional<double> timing_before_first_review_rate;
  std::optional<double> timing_after_last_review_rate;
  std::optional<double> author_donation_rate;
  std::optional<double> author_reviews_permission_rate_among_donors;
  std::optional<double> author_explicit_decline_rate;
  std::optional<double> author_response_rate;
};

/// (submission id, overall scores of its reviews) rating units for the
/// agreement and dispersion statistics.
using ScoreUnits = std::vector<std::pair<std::string, std::vector<ScoreHalf>>>;

/// Reviews whose assignment tier lies in the filter.
std::vector<const ReviewRecord*> filter_reviews(const VenueSnapshot& s,
                                                const std::vector<workflow::Assignment>& assignments,
                                                const TierFilter& tiers);

CountTableRow count_table(const VenueSnapshot& s,
                          const std::vector<workflow::Assignment>& assignments,
                          const TierFilter& tiers, const std::string& label);

ScoreHistogram score_histogram(const std::vector<const ReviewRecord*>& reviews);
ScoreHistogram score_histogram(const std::vector<ReviewRecord>& reviews);

/// Total-variation distance between the normalized views; absent when either
/// histogram is empty.
std::optional<double> total_variation(const ScoreHistogram& a, const ScoreHistogram& b);

/// Groups reviews into per-submission rating units, ordered by submission id.
ScoreUnits units_from_reviews(const std::vector<const ReviewRecord*>& reviews);

/// Krippendorff's alpha with the ordinal metric, computed from the
/// coincidence matrix of within-unit value pairs. Units with fewer than two
/// ratings are ignored.
AgreementStats krippendorff_alpha_ordinal(const ScoreUnits& units);

/// Mean over pairable units of the per-unit (population) standard deviation
/// of overall scores; absent when no unit has two ratings.
std::optional<double> per_paper_score_dispersion(const ScoreUnits& units);

BehaviorStats behavior_stats(const VenueSnapshot& s,
                             const std::vector<workflow::Assignment>& assignments);

/// Everything the stats command emits for one snapshot.
struct CampaignStats {
  std::vector<CountTableRow> rows;
  std::map<std::string, ScoreHistogram> histograms;
  std::map<std::string, AgreementStats> agreement;
  std::map<std::string, std::optional<double>> dispersion;
  std::map<std::string, std::optional<double>> mean_overall;  // in score points
  BehaviorStats behavior;

  const CountTableRow* find_row(const std::string& label) const;
};

/// Computes per-subset statistics for the given filter tokens (default
/// "all,1y,2y,3y") plus the global behavior rates.
CampaignStats compute_campaign_stats(const VenueSnapshot& s,
                                     const std::vector<workflow::Assignment>& assignments,
                                     const std::vector<std::string>& subset_tokens = {
                                         "all", "1y", "2y", "3y"});

/// Machine-readable JSON document for one run.
std::string stats_to_json(const CampaignStats& stats);

/// Plot-data CSV: bucket,count,subset.
std::string plot_csv(const CampaignStats& stats);

/// Rounds to two decimals for table display.
double round2(double v);

}  // namespace threeyes::analytics
