#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include "threeyes/core/types.hpp"

namespace threeyes::io {

/// Local HTTP server exposing a snapshot in the adapter wire shape: JSON over
/// HTTP with cursor pagination ({"items": [...], "cursor": "...",
/// "has_more": bool}) and Bearer-token auth. Used by tests and by operators
/// who want to exercise the adapter path without a live platform.
class MockServer {
 public:
  MockServer(VenueSnapshot snapshot, std::string token);
  ~MockServer();

  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  /// Binds to an ephemeral port on 127.0.0.1 and serves on a background
  /// thread. Returns the port.
  int start();
  void stop();

  std::string base_url() const;

  /// Failure injection: item requests after the first `count` respond with a
  /// truncated JSON body, simulating a mid-stream connection drop.
  void truncate_after(int count) { truncate_after_ = count; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  VenueSnapshot snapshot_;
  std::string token_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> request_count_{0};
  std::atomic<int> truncate_after_{-1};
};

}  // namespace threeyes::io
