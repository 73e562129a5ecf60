#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <vector>

#include "aquachain/rng.hpp"

namespace aquachain {

// x, y horizontal; z is depth (>= 0). Meters.
using Position = Eigen::Vector3d;
using NodeId = std::size_t;

// Per-node flags indexed by NodeId. An empty mask means "no node set".
using NodeMask = std::vector<bool>;

inline bool mask_test(const NodeMask& mask, NodeId id) {
  return id < mask.size() && mask[id];
}

inline double distance(const Position& a, const Position& b) { return (a - b).norm(); }

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  bool operator==(const Range&) const = default;
};

struct NodeState {
  NodeId id = 0;
  Position position = Position::Zero();
  double energy = 0.0;       // J
  double congestion = 0.0;   // [0, 1]
  double failure_prob = 0.0; // [0, 1]
  bool alive = true;

  bool operator==(const NodeState&) const = default;
};

struct NetworkConfig {
  std::size_t n = 0;
  // Deployment box spans [0, area.x] x [0, area.y] x [0, area.z].
  Eigen::Vector3d area{100.0, 100.0, 50.0};
  Position bs_position{50.0, 50.0, 0.0};
  double comm_range = 40.0;
  double initial_energy = 0.5;
  double drift_sigma = 1.0;
  int localization_interval = 10;
  double adaptive_energy = 1e-4;
  std::uint64_t rng_seed = 1;
  Range congestion_init{0.0, 0.2};
  Range failure_prob_init{0.0, 0.1};

  // Center of the z = 0 face.
  static Position default_bs_position(const Eigen::Vector3d& area) {
    return {area.x() / 2.0, area.y() / 2.0, 0.0};
  }

  // Throws ConfigError naming the offending field.
  void validate() const;

  bool operator==(const NetworkConfig&) const = default;
};

struct LocalizationEntry {
  Position last_known_position = Position::Zero();
  int last_update_round = 0;

  bool operator==(const LocalizationEntry&) const = default;
};

// Base-station-side record of where each node was last seen. Indexed by id.
struct LocalizationTable {
  std::vector<LocalizationEntry> entries;

  const LocalizationEntry& at(NodeId id) const { return entries.at(id); }
  const Position& position(NodeId id) const { return entries.at(id).last_known_position; }

  bool operator==(const LocalizationTable&) const = default;
};

struct NetworkState {
  NetworkConfig config;
  std::vector<NodeState> nodes;
  LocalizationTable table;

  std::vector<NodeId> alive_ids() const;
  std::size_t alive_count() const;
  double total_energy() const;

  bool operator==(const NetworkState&) const = default;
};

struct EnergyCharges {
  std::vector<double> spent;  // per node, indexed by id
  std::vector<NodeId> deaths;
};

// Removes up to `joules` from the node and returns the amount actually
// removed. Energy clamps at zero; the alive flag is left to the caller.
double deduct_energy(NodeState& node, double joules);

// Marks every alive node whose energy reached zero as dead; returns their ids.
std::vector<NodeId> mark_exhausted(NetworkState& state);

bool inside_box(const Position& p, const Eigen::Vector3d& area);

NetworkState spawn_network(const NetworkConfig& config, RngStream& rng);
// Seeds its own stream from config.rng_seed.
NetworkState spawn_network(const NetworkConfig& config);

// Alive node farthest from the BS by table position; ties go to the lowest id.
NodeId farthest_node(const NetworkState& state);

// Gaussian random walk with reflection at the box faces. Dead nodes drift too.
void apply_drift(NetworkState& state, RngStream& rng);

// On rounds that are a multiple of the localization interval, charges every
// alive node the adaptive energy and refreshes its table entry. Nodes that
// run dry die immediately.
EnergyCharges update_localization(NetworkState& state, int round);

}  // namespace aquachain
