#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace threeyes::util {

/// Deterministic, platform-independent PRNG (splitmix64). Streams are derived
/// per entity from a master seed so adding entities to a generated venue never
/// perturbs the draws of existing ones.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Child stream keyed by a scope tag and an entity index.
  static Rng derive(std::uint64_t master, std::string_view scope, std::uint64_t index);

  std::uint64_t next_u64();

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform();

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t between(std::int64_t lo, std::int64_t hi);

  bool chance(double p) { return uniform() < p; }

  /// Index drawn from unnormalized non-negative weights.
  std::size_t categorical(std::span<const double> weights);

 private:
  std::uint64_t state_;
};

}  // namespace threeyes::util
