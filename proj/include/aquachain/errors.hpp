#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace aquachain {

// Invalid configuration or scenario content. `field()` is the dotted path of
// the offending entry, e.g. "network.comm_range".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// An operation needed at least one alive node and found none.
class EmptyNetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A run_round call on a network with no survivors.
class SimulationComplete : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ComparisonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aquachain
