#pragma once

#include <string>
#include <vector>

#include "threeyes/core/types.hpp"

namespace threeyes::io {

/// Connection settings for a review-platform endpoint speaking the cursor
/// paginated JSON wire format (see MockServer for the reference shape).
struct AdapterConfig {
  std::string base_url;            // e.g. "http://127.0.0.1:8080"
  std::string auth_token;          // falls back to $THREEYES_TOKEN when empty
  std::vector<std::string> cycle_ids;  // empty = every cycle the server lists
  int page_size = 100;             // >= 1
  int retry_limit = 3;             // <= 10
  int backoff_initial_ms = 100;    // doubles per retry

  /// Throws ConfigError when limits are violated.
  void validate() const;
};

/// Reads a key=value config file (base_url, auth_token, cycle_ids, page_size,
/// retry_limit). The token may also come from $THREEYES_TOKEN.
AdapterConfig load_adapter_config(const std::string& path);

/// Pages through cycles, submissions, reviews, consent tasks and author
/// decisions and assembles a validated snapshot. Transient transport
/// failures are retried with exponential backoff up to retry_limit; a
/// rejected token raises AuthError; exhausting retries raises TransportError
/// without returning a partial snapshot.
VenueSnapshot fetch_snapshot(const AdapterConfig& cfg);

}  // namespace threeyes::io
