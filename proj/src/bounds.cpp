#include "threeyes/io/bounds.hpp"

#include <set>
#include <string>
#include <unordered_set>

namespace threeyes::io {

ReviewerCountBounds reviewer_count_bounds(const VenueSnapshot& s) {
  ReviewerCountBounds out;
  if (s.reviews.empty()) {
    out.exact = true;
    return out;
  }

  std::unordered_set<std::string> keys;
  std::unordered_set<std::string> cycles;
  for (const ReviewRecord& r : s.reviews) cycles.insert(r.cycle_id);

  if (s.identity_map.has_value()) {
    for (const ReviewRecord& r : s.reviews) keys.insert(s.identity_map->at(r.reviewer_id));
    out.exact = true;
  } else if (cycles.size() <= 1) {
    for (const ReviewRecord& r : s.reviews) keys.insert(r.reviewer_id);
    out.exact = true;
  } else {
    for (const ReviewRecord& r : s.reviews) keys.insert(r.reviewer_id + "@" + r.cycle_id);
    out.exact = false;
  }

  out.upper_reviewers = long(keys.size());
  out.lower_reviews_per_reviewer = double(s.reviews.size()) / double(keys.size());
  return out;
}

}  // namespace threeyes::io
