#pragma once

#include <stdexcept>
#include <string>

namespace threeyes {

/// Malformed input data; carries "file:line" context where available.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A snapshot failed referential-integrity validation.
class IntegrityError : public std::runtime_error {
 public:
  explicit IntegrityError(const std::string& what) : std::runtime_error(what) {}
};

/// Platform adapter rejected the credentials.
class AuthError : public std::runtime_error {
 public:
  explicit AuthError(const std::string& what) : std::runtime_error(what) {}
};

/// Platform adapter gave up after exhausting its retry budget.
class TransportError : public std::runtime_error {
 public:
  explicit TransportError(const std::string& what) : std::runtime_error(what) {}
};

/// Operation is not allowed for the artifact's partition tier.
class TierError : public std::runtime_error {
 public:
  explicit TierError(const std::string& what) : std::runtime_error(what) {}
};

/// The resubmission map contains a loop.
class CycleError : public std::runtime_error {
 public:
  explicit CycleError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid generator or adapter configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// An export buffer contained data the release policy forbids; nothing was written.
class LeakError : public std::runtime_error {
 public:
  explicit LeakError(const std::string& what) : std::runtime_error(what) {}
};

/// Snapshot store corruption or misuse.
class StoreError : public std::runtime_error {
 public:
  explicit StoreError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace threeyes
