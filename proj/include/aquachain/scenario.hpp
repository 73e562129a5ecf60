#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "aquachain/energy.hpp"
#include "aquachain/network.hpp"
#include "aquachain/simulation.hpp"

namespace aquachain {

struct OutputPaths {
  std::filesystem::path rounds_csv = "rounds.csv";
  std::filesystem::path summary_json = "summary.json";
  std::optional<std::filesystem::path> trace_json;
};

struct Scenario {
  NetworkConfig network;
  EnergyParams energy;
  SimParams sim;
  OutputPaths output;
};

// Parses a JSON scenario. Only network.n and network.area are required;
// every other field has a default. Unknown keys, wrong types and values
// that break an invariant raise ConfigError naming the dotted field path.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace aquachain
