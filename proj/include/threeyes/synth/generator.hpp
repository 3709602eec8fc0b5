#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "threeyes/analytics/analytics.hpp"
#include "threeyes/core/types.hpp"
#include "threeyes/util/kvconfig.hpp"
#include "threeyes/workflow/workflow.hpp"

namespace threeyes::synth {

/// Synthetic-venue parameters. Defaults are calibrated to published
/// monthly-cycle campaign aggregates: review-count distribution with mean
/// 3.24, unimodal scores with mode 3.0, top-25.7% acceptance, and the
/// observed consent/donation propensities.
struct GeneratorConfig {
  std::uint64_t seed = 42;
  long n_submissions = 3591;
  int n_cycles = 1;
  long reviewer_pool_size = 4421;

  /// Weights for 2, 3, 4, 5 reviews per submission (mean 3.24 by default).
  std::array<double, 4> reviews_per_submission = {0.14, 0.55, 0.24, 0.07};

  /// Per-review overall distribution over the score lattice 1.0 .. 5.0.
  std::array<double, ScoreHalf::kLatticeSize> score_weights = {
      0.02, 0.05, 0.10, 0.15, 0.22, 0.18, 0.13, 0.09, 0.06};

  /// Fraction of each cycle's submissions accepted, ranked by mean overall
  /// score with ties broken by submission id.
  double acceptance_top_fraction = 0.257;

  struct ReviewerConsentModel {
    double respond = 0.519;
    double decline_given_response = 0.0633;
    double attribution_given_agree = 0.3749;
    /// Linear tilt of the response propensity toward reviewers whose reviews
    /// sit on accepted submissions, centered so the mean response rate stays
    /// at `respond`. Zero makes consent independent of acceptance.
    double acceptance_coupling = 0.55;
  } reviewer_consent;

  struct ConsentTimingMix {
    double before = 0.439;
    double during = 0.156;
    double after = 0.4047;
  } consent_timing;

  struct AuthorModel {
    /// Implied response rate (donate + explicit decline); kept for
    /// documentation and reporting, not drawn from directly.
    double respond = 0.67;
    double donate_given_accepted = 0.2953;
    double reviews_permission_given_donate = 0.8779;
    double explicit_decline = 0.3734;
    /// Split of review-permission grants that also cover earlier versions.
    double all_versions_given_permission = 0.25;
  } author_model;

  /// Logistic coefficient linking a reviewer's response propensity to their
  /// mean given score (centered at 3.0). Zero = content-independent consent.
  double score_dependence = 0.0;

  bool emit_identity_map = false;

  /// Fraction of submissions in cycles after the first that carry one
  /// rejected earlier version (id suffix "-v0"), for previous-version tests.
  double resubmission_fraction = 0.0;

  /// Throws ConfigError for out-of-range propensities or weights.
  void validate() const;

  /// Overlays dotted-key assignments; throws ConfigError on unknown keys.
  void apply(const util::KvConfig& kv);
  void set(const std::string& key, const std::string& value);

  static GeneratorConfig from_kv(const util::KvConfig& kv);
  static GeneratorConfig load(const std::string& path);
};

/// Deterministic synthetic campaign: same config (including seed) yields a
/// structurally equal snapshot, and byte-identical fixtures after saving.
VenueSnapshot generate_venue(const GeneratorConfig& cfg);

/// Resubmission links encoded in generated ids: submissions with an existing
/// "<id>-v0" sibling map to it.
workflow::ResubmissionMap resubmission_links(const VenueSnapshot& s);

struct SweepPoint {
  std::string value;
  analytics::CampaignStats stats;
};

/// Runs generate -> workflow -> analytics for each value of one config key.
std::vector<SweepPoint> sweep(const GeneratorConfig& base, const std::string& parameter,
                              const std::vector<std::string>& values);

/// CSV of headline statistics vs the swept parameter.
std::string sweep_csv(const std::vector<SweepPoint>& points, const std::string& parameter);

}  // namespace threeyes::synth
