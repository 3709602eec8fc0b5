// Independent oracles used by the unit and acceptance suites. Everything here
// is deliberately naive and computed by a different route than the library:
// the truth tables are frozen data, alpha is computed by literal ordered-pair
// enumeration, histograms by a one-pass tally.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "threeyes/core/types.hpp"

namespace oracles {

using threeyes::Acceptance;
using threeyes::AuthorChoice;
using threeyes::ReviewerDecision;
using threeyes::Tier;

struct ReviewRow {
  ReviewerDecision reviewer;
  Acceptance acceptance;
  AuthorChoice author;
  Tier expected;
};

// The full 3 x 3 x 5 decision table, written out row by row.
inline const std::vector<ReviewRow>& review_truth_table() {
  using R = ReviewerDecision;
  using A = Acceptance;
  using C = AuthorChoice;
  static const std::vector<ReviewRow> table = {
      // First gate open, paper accepted: author choice decides 2Y vs 3Y.
      {R::agree, A::accepted, C::no_response, Tier::Protected2Y},
      {R::agree, A::accepted, C::decline, Tier::Protected2Y},
      {R::agree, A::accepted, C::paper_only, Tier::Protected2Y},
      {R::agree, A::accepted, C::paper_and_reviews, Tier::Public3Y},
      {R::agree, A::accepted, C::paper_and_reviews_all_versions, Tier::Public3Y},
      // First gate open, not (yet) accepted: protected 1Y regardless of author.
      {R::agree, A::rejected, C::no_response, Tier::Protected1Y},
      {R::agree, A::rejected, C::decline, Tier::Protected1Y},
      {R::agree, A::rejected, C::paper_only, Tier::Protected1Y},
      {R::agree, A::rejected, C::paper_and_reviews, Tier::Protected1Y},
      {R::agree, A::rejected, C::paper_and_reviews_all_versions, Tier::Protected1Y},
      {R::agree, A::pending, C::no_response, Tier::Protected1Y},
      {R::agree, A::pending, C::decline, Tier::Protected1Y},
      {R::agree, A::pending, C::paper_only, Tier::Protected1Y},
      {R::agree, A::pending, C::paper_and_reviews, Tier::Protected1Y},
      {R::agree, A::pending, C::paper_and_reviews_all_versions, Tier::Protected1Y},
      // First gate closed: excluded no matter what.
      {R::decline, A::accepted, C::no_response, Tier::Excluded},
      {R::decline, A::accepted, C::decline, Tier::Excluded},
      {R::decline, A::accepted, C::paper_only, Tier::Excluded},
      {R::decline, A::accepted, C::paper_and_reviews, Tier::Excluded},
      {R::decline, A::accepted, C::paper_and_reviews_all_versions, Tier::Excluded},
      {R::decline, A::rejected, C::no_response, Tier::Excluded},
      {R::decline, A::rejected, C::decline, Tier::Excluded},
      {R::decline, A::rejected, C::paper_only, Tier::Excluded},
      {R::decline, A::rejected, C::paper_and_reviews, Tier::Excluded},
      {R::decline, A::rejected, C::paper_and_reviews_all_versions, Tier::Excluded},
      {R::decline, A::pending, C::no_response, Tier::Excluded},
      {R::decline, A::pending, C::decline, Tier::Excluded},
      {R::decline, A::pending, C::paper_only, Tier::Excluded},
      {R::decline, A::pending, C::paper_and_reviews, Tier::Excluded},
      {R::decline, A::pending, C::paper_and_reviews_all_versions, Tier::Excluded},
      {R::no_response, A::accepted, C::no_response, Tier::Excluded},
      {R::no_response, A::accepted, C::decline, Tier::Excluded},
      {R::no_response, A::accepted, C::paper_only, Tier::Excluded},
      {R::no_response, A::accepted, C::paper_and_reviews, Tier::Excluded},
      {R::no_response, A::accepted, C::paper_and_reviews_all_versions, Tier::Excluded},
      {R::no_response, A::rejected, C::no_response, Tier::Excluded},
      {R::no_response, A::rejected, C::decline, Tier::Excluded},
      {R::no_response, A::rejected, C::paper_only, Tier::Excluded},
      {R::no_response, A::rejected, C::paper_and_reviews, Tier::Excluded},
      {R::no_response, A::rejected, C::paper_and_reviews_all_versions, Tier::Excluded},
      {R::no_response, A::pending, C::no_response, Tier::Excluded},
      {R::no_response, A::pending, C::decline, Tier::Excluded},
      {R::no_response, A::pending, C::paper_only, Tier::Excluded},
      {R::no_response, A::pending, C::paper_and_reviews, Tier::Excluded},
      {R::no_response, A::pending, C::paper_and_reviews_all_versions, Tier::Excluded},
  };
  return table;
}

struct DraftRow {
  Acceptance acceptance;
  AuthorChoice author;
  Tier expected;
};

// All 3 x 5 draft combinations.
inline const std::vector<DraftRow>& draft_truth_table() {
  using A = Acceptance;
  using C = AuthorChoice;
  static const std::vector<DraftRow> table = {
      {A::accepted, C::no_response, Tier::Excluded},
      {A::accepted, C::decline, Tier::Excluded},
      {A::accepted, C::paper_only, Tier::Public3Y},
      {A::accepted, C::paper_and_reviews, Tier::Public3Y},
      {A::accepted, C::paper_and_reviews_all_versions, Tier::Public3Y},
      {A::rejected, C::no_response, Tier::Excluded},
      {A::rejected, C::decline, Tier::Excluded},
      {A::rejected, C::paper_only, Tier::Excluded},
      {A::rejected, C::paper_and_reviews, Tier::Excluded},
      {A::rejected, C::paper_and_reviews_all_versions, Tier::Excluded},
      {A::pending, C::no_response, Tier::Excluded},
      {A::pending, C::decline, Tier::Excluded},
      {A::pending, C::paper_only, Tier::Excluded},
      {A::pending, C::paper_and_reviews, Tier::Excluded},
      {A::pending, C::paper_and_reviews_all_versions, Tier::Excluded},
  };
  return table;
}

struct AlphaResult {
  bool defined = false;
  double alpha = 0.0;
};

// Ordinal Krippendorff alpha by explicit ordered-pair enumeration over a
// coincidence matrix. Units hold raw twice_values; units with fewer than two
// ratings are dropped.
inline AlphaResult alpha_ordinal_bruteforce(const std::vector<std::vector<int>>& units) {
  std::vector<std::vector<int>> pairable;
  for (const auto& u : units) {
    if (u.size() >= 2) pairable.push_back(u);
  }
  if (pairable.empty()) return {};

  std::set<int> category_set;
  for (const auto& u : pairable) {
    for (int v : u) category_set.insert(v);
  }
  std::vector<int> categories(category_set.begin(), category_set.end());
  const std::size_t n_cat = categories.size();
  auto index_of = [&categories](int value) {
    return std::size_t(std::lower_bound(categories.begin(), categories.end(), value) -
                       categories.begin());
  };

  // Coincidence counts: literally walk every ordered pair inside each unit.
  std::vector<std::vector<double>> o(n_cat, std::vector<double>(n_cat, 0.0));
  for (const auto& u : pairable) {
    const double m = double(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      for (std::size_t j = 0; j < u.size(); ++j) {
        if (i == j) continue;
        o[index_of(u[i])][index_of(u[j])] += 1.0 / (m - 1.0);
      }
    }
  }

  std::vector<double> marginal(n_cat, 0.0);
  double n_total = 0.0;
  for (std::size_t c = 0; c < n_cat; ++c) {
    for (std::size_t k = 0; k < n_cat; ++k) marginal[c] += o[c][k];
    n_total += marginal[c];
  }

  auto delta_sq = [&](std::size_t c, std::size_t k) {
    std::size_t lo = std::min(c, k), hi = std::max(c, k);
    double between = 0.0;
    for (std::size_t g = lo; g <= hi; ++g) between += marginal[g];
    double d = between - (marginal[c] + marginal[k]) / 2.0;
    return d * d;
  };

  double d_observed = 0.0;
  double d_expected = 0.0;
  for (std::size_t c = 0; c < n_cat; ++c) {
    for (std::size_t k = 0; k < n_cat; ++k) {
      d_observed += o[c][k] * delta_sq(c, k);
      d_expected += marginal[c] * marginal[k] * delta_sq(c, k);
    }
  }
  d_observed /= n_total;
  d_expected /= n_total * (n_total - 1.0);

  if (d_expected <= 0.0) return {};
  return {true, 1.0 - d_observed / d_expected};
}

// One-pass tally of overall scores, independent of the library histogram.
inline std::array<long, 9> tally_scores(const std::vector<threeyes::ReviewRecord>& reviews) {
  std::array<long, 9> buckets{};
  for (const auto& r : reviews) buckets[std::size_t(r.overall.twice_value - 2)] += 1;
  return buckets;
}

}  // namespace oracles
