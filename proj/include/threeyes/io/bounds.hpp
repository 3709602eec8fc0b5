#pragma once

#include <optional>

#include "threeyes/core/types.hpp"

namespace threeyes::io {

/// Reviewer-diversity counts. Reviewer identities are scoped per cycle by the
/// platform, so without a cross-cycle identity map a multi-cycle snapshot
/// only supports an upper bound on unique reviewers (counting per-cycle rows)
/// and hence a lower bound on reviews per reviewer.
struct ReviewerCountBounds {
  long upper_reviewers = 0;  // exact count when `exact`
  std::optional<double> lower_reviews_per_reviewer;  // exact mean when `exact`
  bool exact = false;
};

ReviewerCountBounds reviewer_count_bounds(const VenueSnapshot& s);

}  // namespace threeyes::io
