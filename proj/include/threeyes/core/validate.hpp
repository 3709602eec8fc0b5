#pragma once

#include <string>
#include <vector>

#include "threeyes/core/types.hpp"

namespace threeyes {

/// A broken invariant, reported as data rather than as a failure.
struct Violation {
  std::string record_id;
  std::string invariant;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::string to_string(const Violation& v);

/// Checks every type invariant of the data model: referential integrity,
/// score ranges, consent/decision consistency, identity-map totality.
/// Returns an empty list iff the snapshot is valid.
std::vector<Violation> validate_snapshot(const VenueSnapshot& s);

}  // namespace threeyes
