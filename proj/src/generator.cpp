#include "threeyes/synth/generator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "threeyes/util/errors.hpp"
#include "threeyes/util/rng.hpp"

namespace threeyes::synth {

using util::Rng;

namespace {

constexpr Timestamp kMillisPerHour = 3600LL * 1000;
constexpr Timestamp kMillisPerDay = 24 * kMillisPerHour;
constexpr Timestamp kCycleLength = 30 * kMillisPerDay;
// 2021-09-01T00:00:00Z, the first synthetic cycle.
constexpr Timestamp kEpochBase = 1630454400000LL;

void check_unit(const char* name, double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ConfigError(std::string("generator: ") + name + " must be in [0, 1], got " +
                      std::to_string(v));
  }
}

template <std::size_t N>
void check_distribution(const char* name, const std::array<double, N>& weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ConfigError(std::string("generator: negative weight in ") + name);
    sum += w;
  }
  // Published propensities round to four digits, so allow a small slack and
  // normalize at draw time.
  if (sum < 0.9 || sum > 1.1) {
    throw ConfigError(std::string("generator: weights of ") + name +
                      " must sum to 1 (got " + std::to_string(sum) + ")");
  }
}

std::string zero_pad(long value, int width) {
  std::string s = std::to_string(value);
  while (int(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

std::string month_label(int cycle_index) {
  int month0 = 8 + cycle_index;  // September 2021 onward
  int year = 2021 + month0 / 12;
  int month = month0 % 12 + 1;
  return std::to_string(year) + "-" + zero_pad(month, 2);
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace

void GeneratorConfig::validate() const {
  if (n_submissions < 0) throw ConfigError("generator: n_submissions must be >= 0");
  if (n_cycles < 1) throw ConfigError("generator: n_cycles must be >= 1");
  if (reviewer_pool_size < 5) throw ConfigError("generator: reviewer_pool_size must be >= 5");
  check_distribution("reviews_per_submission", reviews_per_submission);
  check_distribution("score_model.weights", score_weights);
  if (!(acceptance_top_fraction > 0.0 && acceptance_top_fraction <= 1.0)) {
    throw ConfigError("generator: acceptance_model.top_fraction must be in (0, 1]");
  }
  check_unit("reviewer_consent.respond", reviewer_consent.respond);
  check_unit("reviewer_consent.decline_given_response", reviewer_consent.decline_given_response);
  check_unit("reviewer_consent.attribution_given_agree", reviewer_consent.attribution_given_agree);
  if (std::abs(reviewer_consent.acceptance_coupling) > 1.0) {
    throw ConfigError("generator: reviewer_consent.acceptance_coupling must be in [-1, 1]");
  }
  std::array<double, 3> timing = {consent_timing.before, consent_timing.during,
                                  consent_timing.after};
  check_distribution("consent_timing", timing);
  check_unit("author_model.respond", author_model.respond);
  check_unit("author_model.donate_given_accepted", author_model.donate_given_accepted);
  check_unit("author_model.reviews_permission_given_donate",
             author_model.reviews_permission_given_donate);
  check_unit("author_model.explicit_decline", author_model.explicit_decline);
  check_unit("author_model.all_versions_given_permission",
             author_model.all_versions_given_permission);
  if (author_model.donate_given_accepted + author_model.explicit_decline > 1.0) {
    throw ConfigError("generator: author donate + decline rates exceed 1");
  }
  check_unit("resubmission_fraction", resubmission_fraction);
}

void GeneratorConfig::apply(const util::KvConfig& kv) {
  for (const auto& [key, _] : kv.values()) {
    if (key == "seed") seed = kv.get_uint(key, seed);
    else if (key == "n_submissions") n_submissions = kv.get_int(key, n_submissions);
    else if (key == "n_cycles") n_cycles = int(kv.get_int(key, n_cycles));
    else if (key == "reviewer_pool_size") reviewer_pool_size = kv.get_int(key, reviewer_pool_size);
    else if (key == "reviews_per_submission.p2") reviews_per_submission[0] = kv.get_double(key, 0);
    else if (key == "reviews_per_submission.p3") reviews_per_submission[1] = kv.get_double(key, 0);
    else if (key == "reviews_per_submission.p4") reviews_per_submission[2] = kv.get_double(key, 0);
    else if (key == "reviews_per_submission.p5") reviews_per_submission[3] = kv.get_double(key, 0);
    else if (key == "score_model.weights") {
      std::vector<double> w = kv.get_doubles(key, {});
      if (w.size() != score_weights.size()) {
        throw ConfigError("generator: score_model.weights needs exactly 9 values");
      }
      std::copy(w.begin(), w.end(), score_weights.begin());
    } else if (key == "acceptance_model.top_fraction") {
      acceptance_top_fraction = kv.get_double(key, acceptance_top_fraction);
    } else if (key == "reviewer_consent.respond") {
      reviewer_consent.respond = kv.get_double(key, 0);
    } else if (key == "reviewer_consent.decline_given_response") {
      reviewer_consent.decline_given_response = kv.get_double(key, 0);
    } else if (key == "reviewer_consent.attribution_given_agree") {
      reviewer_consent.attribution_given_agree = kv.get_double(key, 0);
    } else if (key == "reviewer_consent.acceptance_coupling") {
      reviewer_consent.acceptance_coupling = kv.get_double(key, 0);
    } else if (key == "consent_timing.before") {
      consent_timing.before = kv.get_double(key, 0);
    } else if (key == "consent_timing.during") {
      consent_timing.during = kv.get_double(key, 0);
    } else if (key == "consent_timing.after") {
      consent_timing.after = kv.get_double(key, 0);
    } else if (key == "author_model.respond") {
      author_model.respond = kv.get_double(key, 0);
    } else if (key == "author_model.donate_given_accepted") {
      author_model.donate_given_accepted = kv.get_double(key, 0);
    } else if (key == "author_model.reviews_permission_given_donate") {
      author_model.reviews_permission_given_donate = kv.get_double(key, 0);
    } else if (key == "author_model.explicit_decline") {
      author_model.explicit_decline = kv.get_double(key, 0);
    } else if (key == "author_model.all_versions_given_permission") {
      author_model.all_versions_given_permission = kv.get_double(key, 0);
    } else if (key == "score_dependence") {
      score_dependence = kv.get_double(key, 0);
    } else if (key == "emit_identity_map") {
      emit_identity_map = kv.get_bool(key, false);
    } else if (key == "resubmission_fraction") {
      resubmission_fraction = kv.get_double(key, 0);
    } else {
      throw ConfigError("generator: unknown config key '" + key + "'");
    }
  }
}

void GeneratorConfig::set(const std::string& key, const std::string& value) {
  util::KvConfig kv;
  kv.set(key, value);
  apply(kv);
}

GeneratorConfig GeneratorConfig::from_kv(const util::KvConfig& kv) {
  GeneratorConfig cfg;
  cfg.apply(kv);
  cfg.validate();
  return cfg;
}

GeneratorConfig GeneratorConfig::load(const std::string& path) {
  return from_kv(util::KvConfig::load(path));
}

namespace {

struct PlannedSubmission {
  long index = 0;
  std::string id;
  int cycle = 0;
  bool prior_version = false;  // forced rejected, excluded from ranking
  std::vector<long> reviewer_indices;
  std::vector<int> score_twices;
  std::vector<Timestamp> review_times;
  double mean_twice = 0.0;
  bool accepted = false;
};

std::string submission_id(long index) { return "sub-" + zero_pad(index, 6); }

std::string reviewer_public_id(const GeneratorConfig& cfg, int cycle, long reviewer_index) {
  if (cfg.n_cycles == 1) return "rvr-" + zero_pad(reviewer_index, 5);
  return "rvr-c" + zero_pad(cycle + 1, 2) + "-" + zero_pad(reviewer_index, 5);
}

TextFields synthetic_text() {
  TextFields t;
  t.paper_summary = "[synthetic] placeholder paper summary.";
  t.summary_of_strengths = "[synthetic] placeholder strengths.";
  t.summary_of_weaknesses = "[synthetic] placeholder weaknesses.";
  t.comments_suggestions_typos = "[synthetic] placeholder comments.";
  t.best_paper_justification = "";
  t.ethical_concerns = "";
  return t;
}

std::string hex16(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[std::size_t(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

// One submission plus its reviews, drawn from entity-scoped streams.
void plan_reviews(const GeneratorConfig& cfg, PlannedSubmission& plan) {
  Rng rng = Rng::derive(cfg.seed, plan.prior_version ? "reviews-prior" : "reviews", plan.index);
  std::array<double, 4> count_weights = cfg.reviews_per_submission;
  int k = 2 + int(rng.categorical(count_weights));

  std::set<long> chosen;
  while (int(chosen.size()) < k) {
    chosen.insert(long(rng.below(std::uint64_t(cfg.reviewer_pool_size))));
  }
  plan.reviewer_indices.assign(chosen.begin(), chosen.end());

  Timestamp window_start = kEpochBase + Timestamp(plan.cycle) * kCycleLength;
  double total_twice = 0.0;
  for (int i = 0; i < k; ++i) {
    int twice = ScoreHalf::kMinTwice + int(rng.categorical(cfg.score_weights));
    plan.score_twices.push_back(twice);
    total_twice += twice;
    Timestamp at = window_start + kMillisPerDay + rng.between(0, 24 * kMillisPerDay);
    plan.review_times.push_back(at);
  }
  plan.mean_twice = total_twice / double(k);
}

}  // namespace

VenueSnapshot generate_venue(const GeneratorConfig& cfg) {
  cfg.validate();
  VenueSnapshot s;

  for (int c = 0; c < cfg.n_cycles; ++c) {
    s.cycles.push_back(Cycle{"cyc-" + zero_pad(c + 1, 2), month_label(c)});
  }

  // Plan submissions and their reviews.
  std::vector<PlannedSubmission> plans;
  plans.reserve(std::size_t(cfg.n_submissions));
  for (long i = 0; i < cfg.n_submissions; ++i) {
    PlannedSubmission plan;
    plan.index = i;
    plan.id = submission_id(i);
    plan.cycle = int(i % cfg.n_cycles);
    plan_reviews(cfg, plan);
    plans.push_back(std::move(plan));
  }

  // Optional rejected earlier versions for resubmission tests.
  if (cfg.resubmission_fraction > 0.0 && cfg.n_cycles >= 2) {
    std::vector<PlannedSubmission> priors;
    for (const PlannedSubmission& plan : plans) {
      if (plan.cycle == 0) continue;
      Rng rng = Rng::derive(cfg.seed, "resubmission", plan.index);
      if (!rng.chance(cfg.resubmission_fraction)) continue;
      PlannedSubmission prior;
      prior.index = plan.index;
      prior.id = plan.id + "-v0";
      prior.cycle = plan.cycle - 1;
      prior.prior_version = true;
      plan_reviews(cfg, prior);
      priors.push_back(std::move(prior));
    }
    for (PlannedSubmission& prior : priors) plans.push_back(std::move(prior));
  }

  // Acceptance: per cycle, top fraction by mean overall, ties by id.
  std::map<int, std::vector<PlannedSubmission*>> ranked_by_cycle;
  for (PlannedSubmission& plan : plans) {
    if (!plan.prior_version) ranked_by_cycle[plan.cycle].push_back(&plan);
  }
  for (auto& [cycle, ranked] : ranked_by_cycle) {
    std::sort(ranked.begin(), ranked.end(),
              [](const PlannedSubmission* a, const PlannedSubmission* b) {
                if (a->mean_twice != b->mean_twice) return a->mean_twice > b->mean_twice;
                return a->id < b->id;
              });
    long n_accept = std::llround(cfg.acceptance_top_fraction * double(ranked.size()));
    n_accept = std::clamp(n_accept, 0L, long(ranked.size()));
    for (long i = 0; i < n_accept; ++i) ranked[std::size_t(i)]->accepted = true;
  }

  // Materialize submissions and reviews.
  std::map<std::pair<long, int>, std::vector<const PlannedSubmission*>> reviewer_cycle_work;
  for (const PlannedSubmission& plan : plans) {
    Rng author_rng = Rng::derive(cfg.seed, "authors", plan.index);
    Submission sub;
    sub.id = plan.id;
    sub.cycle_id = s.cycles[std::size_t(plan.cycle)].id;
    int n_authors = int(author_rng.between(1, 4));
    for (int a = 0; a < n_authors; ++a) {
      sub.author_ids.insert("aut-" + zero_pad(long(author_rng.below(
                                          std::uint64_t(3 * cfg.n_submissions + 8))), 6));
    }
    // Content handle stays opaque: no record id may be derivable from it.
    sub.draft_ref = "blob:" + hex16(Rng::derive(cfg.seed,
                                                plan.prior_version ? "draft-ref-prior" : "draft-ref",
                                                plan.index)
                                        .next_u64());
    sub.acceptance = plan.accepted ? Acceptance::accepted : Acceptance::rejected;
    if (plan.accepted) sub.venue = "synthetic-venue-2022";
    s.submissions.push_back(std::move(sub));

    for (std::size_t slot = 0; slot < plan.reviewer_indices.size(); ++slot) {
      ReviewRecord r;
      r.id = plan.id + "-r" + std::to_string(slot + 1);
      r.submission_id = plan.id;
      r.cycle_id = s.cycles[std::size_t(plan.cycle)].id;
      r.reviewer_id = reviewer_public_id(cfg, plan.cycle, plan.reviewer_indices[slot]);
      r.text_fields = synthetic_text();
      r.overall = ScoreHalf{plan.score_twices[slot]};
      Rng form_rng = Rng::derive(cfg.seed, plan.prior_version ? "form-prior" : "form",
                                 std::uint64_t(plan.index) * 8 + slot);
      r.confidence = int(form_rng.between(2, 5));
      r.best_paper = plan.score_twices[slot] >= 9 ? BestPaper::maybe : BestPaper::no;
      if (r.best_paper == BestPaper::maybe) {
        r.text_fields.best_paper_justification = "[synthetic] placeholder justification.";
      }
      r.replicability = int(form_rng.between(1, 5));
      r.datasets = int(form_rng.between(1, 5));
      r.software = int(form_rng.between(1, 5));
      r.author_identity_guess = int(form_rng.between(1, 3));
      r.submitted_at = plan.review_times[slot];
      s.reviews.push_back(std::move(r));

      reviewer_cycle_work[{plan.reviewer_indices[slot], plan.cycle}].push_back(&plan);
    }
  }

  // Reviewer-level mean response propensity stays at the configured value:
  // the acceptance coupling and score dependence tilt around the mean
  // accepted-share and the lattice midpoint.
  double mean_accepted_share = 0.0;
  if (!reviewer_cycle_work.empty()) {
    for (const auto& [key, work] : reviewer_cycle_work) {
      long accepted = 0;
      long total = 0;
      for (const PlannedSubmission* plan : work) {
        for (std::size_t slot = 0; slot < plan->reviewer_indices.size(); ++slot) {
          if (plan->reviewer_indices[slot] == key.first && plan->cycle == key.second) {
            total += 1;
            if (plan->accepted) accepted += 1;
          }
        }
      }
      mean_accepted_share += total > 0 ? double(accepted) / double(total) : 0.0;
    }
    mean_accepted_share /= double(reviewer_cycle_work.size());
  }

  for (const auto& [key, work] : reviewer_cycle_work) {
    const auto& [reviewer_index, cycle] = key;
    Rng rng = Rng::derive(cfg.seed, "consent",
                          std::uint64_t(reviewer_index) * 64 + std::uint64_t(cycle));
    // Fixed draw order keeps decisions comparable across parameter sweeps.
    double u_respond = rng.uniform();
    double u_decline = rng.uniform();
    double u_attribution = rng.uniform();
    std::array<double, 3> timing_weights = {cfg.consent_timing.before, cfg.consent_timing.during,
                                            cfg.consent_timing.after};
    std::size_t timing = rng.categorical(timing_weights);
    Timestamp offset = kMillisPerHour + rng.between(0, 71 * kMillisPerHour);
    double u_during = rng.uniform();

    long my_reviews = 0;
    long my_accepted = 0;
    double my_twice_sum = 0.0;
    Timestamp first_review = 0;
    Timestamp last_review = 0;
    bool first_seen = false;
    for (const PlannedSubmission* plan : work) {
      for (std::size_t slot = 0; slot < plan->reviewer_indices.size(); ++slot) {
        if (plan->reviewer_indices[slot] != reviewer_index || plan->cycle != cycle) continue;
        my_reviews += 1;
        if (plan->accepted) my_accepted += 1;
        my_twice_sum += plan->score_twices[slot];
        Timestamp at = plan->review_times[slot];
        if (!first_seen || at < first_review) first_review = at;
        if (!first_seen || at > last_review) last_review = at;
        first_seen = true;
      }
    }

    double respond_p = cfg.reviewer_consent.respond;
    if (cfg.score_dependence != 0.0 && respond_p > 0.0 && respond_p < 1.0) {
      double mean_score = my_twice_sum / double(my_reviews) / 2.0;
      respond_p = logistic(logit(respond_p) + cfg.score_dependence * (mean_score - 3.0));
    }
    double accepted_share = double(my_accepted) / double(my_reviews);
    respond_p += cfg.reviewer_consent.acceptance_coupling * (accepted_share - mean_accepted_share);
    respond_p = std::clamp(respond_p, 0.0, 1.0);

    if (u_respond >= respond_p) continue;  // no response, no consent row

    ReviewerConsent consent;
    consent.reviewer_id = reviewer_public_id(cfg, cycle, reviewer_index);
    consent.cycle_id = s.cycles[std::size_t(cycle)].id;
    bool declines = u_decline < cfg.reviewer_consent.decline_given_response;
    consent.decision = declines ? ReviewerDecision::decline : ReviewerDecision::agree;
    consent.attribution_requested =
        !declines && u_attribution < cfg.reviewer_consent.attribution_given_agree;
    switch (timing) {
      case 0:
        consent.decided_at = first_review - offset;
        break;
      case 2:
        consent.decided_at = last_review + offset;
        break;
      default:
        consent.decided_at =
            first_review +
            Timestamp(u_during * double(std::max<Timestamp>(last_review - first_review, 0)));
        break;
    }
    s.reviewer_consents.push_back(std::move(consent));
  }

  // Author decisions: only accepted submissions are asked.
  for (const PlannedSubmission& plan : plans) {
    if (!plan.accepted) continue;
    Rng rng = Rng::derive(cfg.seed, "author-decision", plan.index);
    double u_kind = rng.uniform();
    double u_permission = rng.uniform();
    double u_versions = rng.uniform();
    Timestamp decided = kEpochBase + Timestamp(plan.cycle) * kCycleLength +
                        40 * kMillisPerDay + rng.between(0, 10 * kMillisPerDay);

    AuthorDecision d;
    d.submission_id = plan.id;
    if (u_kind < cfg.author_model.donate_given_accepted) {
      if (u_permission < cfg.author_model.reviews_permission_given_donate) {
        d.decision = u_versions < cfg.author_model.all_versions_given_permission
                         ? AuthorChoice::paper_and_reviews_all_versions
                         : AuthorChoice::paper_and_reviews;
      } else {
        d.decision = AuthorChoice::paper_only;
      }
    } else if (u_kind <
               cfg.author_model.donate_given_accepted + cfg.author_model.explicit_decline) {
      d.decision = AuthorChoice::decline;
    } else {
      continue;  // no response
    }
    d.decided_at = decided;
    s.author_decisions.push_back(std::move(d));
  }

  if (cfg.emit_identity_map) {
    std::map<std::string, std::string> map;
    for (const auto& [key, _] : reviewer_cycle_work) {
      map[reviewer_public_id(cfg, key.second, key.first)] =
          "person-" + zero_pad(key.first, 5);
    }
    s.identity_map = std::move(map);
  }

  return s;
}

workflow::ResubmissionMap resubmission_links(const VenueSnapshot& s) {
  std::set<std::string> ids;
  for (const Submission& sub : s.submissions) ids.insert(sub.id);
  workflow::ResubmissionMap links;
  for (const std::string& id : ids) {
    if (ids.count(id + "-v0")) links[id] = {id + "-v0"};
  }
  return links;
}

std::vector<SweepPoint> sweep(const GeneratorConfig& base, const std::string& parameter,
                              const std::vector<std::string>& values) {
  std::vector<SweepPoint> points;
  for (const std::string& value : values) {
    GeneratorConfig cfg = base;
    cfg.set(parameter, value);
    cfg.validate();
    VenueSnapshot snapshot = generate_venue(cfg);
    std::vector<workflow::Assignment> assignments = workflow::run_workflow(snapshot);
    points.push_back(SweepPoint{value, analytics::compute_campaign_stats(snapshot, assignments)});
  }
  return points;
}

namespace {

std::string csv_cell(const std::optional<double>& v) {
  return v.has_value() ? std::to_string(*v) : "";
}

}  // namespace

std::string sweep_csv(const std::vector<SweepPoint>& points, const std::string& parameter) {
  std::string out = "parameter,value";
  for (const char* label : {"all", "1y", "2y", "3y"}) {
    out += ",n_reviews_" + std::string(label);
  }
  out += ",retention_1y_all,retention_2y_1y,retention_3y_2y,tv_1y_all";
  for (const char* label : {"all", "1y", "2y", "3y"}) {
    out += ",mean_overall_" + std::string(label);
  }
  out += ",alpha_1y,dispersion_1y,dispersion_2y,dispersion_3y";
  out += ",reviewer_response_rate,author_donation_rate\n";

  for (const SweepPoint& p : points) {
    out += parameter + "," + p.value;
    std::map<std::string, long> reviews;
    for (const char* label : {"all", "1y", "2y", "3y"}) {
      const analytics::CountTableRow* row = p.stats.find_row(label);
      reviews[label] = row ? row->n_reviews : 0;
      out += "," + std::to_string(reviews[label]);
    }
    auto ratio = [&reviews](const char* num, const char* den) {
      return reviews[den] > 0 ? std::to_string(double(reviews[num]) / double(reviews[den])) : "";
    };
    out += "," + ratio("1y", "all") + "," + ratio("2y", "1y") + "," + ratio("3y", "2y");
    std::optional<double> tv;
    if (p.stats.histograms.count("1y") && p.stats.histograms.count("all")) {
      tv = analytics::total_variation(p.stats.histograms.at("1y"), p.stats.histograms.at("all"));
    }
    out += "," + csv_cell(tv);
    for (const char* label : {"all", "1y", "2y", "3y"}) {
      auto it = p.stats.mean_overall.find(label);
      out += "," + csv_cell(it == p.stats.mean_overall.end() ? std::nullopt : it->second);
    }
    auto alpha_it = p.stats.agreement.find("1y");
    out += "," + csv_cell(alpha_it == p.stats.agreement.end() ? std::nullopt
                                                              : alpha_it->second.alpha);
    for (const char* label : {"1y", "2y", "3y"}) {
      auto it = p.stats.dispersion.find(label);
      out += "," + csv_cell(it == p.stats.dispersion.end() ? std::nullopt : it->second);
    }
    out += "," + csv_cell(p.stats.behavior.reviewer_response_rate);
    out += "," + csv_cell(p.stats.behavior.author_donation_rate);
    out += "\n";
  }
  return out;
}

}  // namespace threeyes::synth
