#include "aquachain/network.hpp"

#include <algorithm>
#include <cmath>

#include "aquachain/errors.hpp"

namespace aquachain {

namespace {

void require(bool ok, const char* field, const char* message) {
  if (!ok) throw ConfigError(field, message);
}

bool valid_unit_range(const Range& r) {
  return std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo >= 0.0 && r.hi <= 1.0 && r.lo <= r.hi;
}

// Folds a coordinate back into [0, extent] by mirror reflection.
double reflect(double x, double extent) {
  if (extent <= 0.0) return 0.0;
  if (x >= 0.0 && x <= extent) return x;
  const double period = 2.0 * extent;
  double y = std::fmod(x, period);
  if (y < 0.0) y += period;
  if (y > extent) y = period - y;
  return std::clamp(y, 0.0, extent);
}

}  // namespace

void NetworkConfig::validate() const {
  require(n >= 1, "network.n", "must be at least 1");
  require(area.allFinite() && (area.array() >= 0.0).all(), "network.area",
          "extents must be finite and non-negative");
  require(bs_position.allFinite(), "network.bs_position", "must be finite");
  require(std::isfinite(comm_range) && comm_range > 0.0, "network.comm_range", "must be > 0");
  require(std::isfinite(initial_energy) && initial_energy > 0.0, "network.initial_energy",
          "must be > 0");
  require(std::isfinite(drift_sigma) && drift_sigma >= 0.0, "network.drift_sigma", "must be >= 0");
  require(localization_interval >= 1, "network.localization_interval", "must be >= 1");
  require(std::isfinite(adaptive_energy) && adaptive_energy >= 0.0, "network.adaptive_energy",
          "must be >= 0");
  require(valid_unit_range(congestion_init), "network.congestion_init",
          "must be an ordered range inside [0, 1]");
  require(valid_unit_range(failure_prob_init), "network.failure_prob_init",
          "must be an ordered range inside [0, 1]");
}

std::vector<NodeId> NetworkState::alive_ids() const {
  std::vector<NodeId> ids;
  for (const auto& node : nodes)
    if (node.alive) ids.push_back(node.id);
  return ids;
}

std::size_t NetworkState::alive_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const NodeState& n) { return n.alive; }));
}

double NetworkState::total_energy() const {
  double sum = 0.0;
  for (const auto& node : nodes) sum += node.energy;
  return sum;
}

double deduct_energy(NodeState& node, double joules) {
  const double before = node.energy;
  node.energy = std::max(0.0, before - joules);
  return before - node.energy;
}

std::vector<NodeId> mark_exhausted(NetworkState& state) {
  std::vector<NodeId> dead;
  for (auto& node : state.nodes) {
    if (node.alive && node.energy <= 0.0) {
      node.energy = 0.0;
      node.alive = false;
      dead.push_back(node.id);
    }
  }
  return dead;
}

bool inside_box(const Position& p, const Eigen::Vector3d& area) {
  return p.allFinite() && (p.array() >= 0.0).all() && (p.array() <= area.array()).all();
}

NetworkState spawn_network(const NetworkConfig& config, RngStream& rng) {
  config.validate();
  NetworkState state;
  state.config = config;
  state.nodes.reserve(config.n);
  state.table.entries.reserve(config.n);
  for (NodeId id = 0; id < config.n; ++id) {
    NodeState node;
    node.id = id;
    for (int axis = 0; axis < 3; ++axis) node.position[axis] = rng.uniform(0.0, config.area[axis]);
    node.energy = config.initial_energy;
    node.congestion =
        std::clamp(rng.uniform(config.congestion_init.lo, config.congestion_init.hi), 0.0, 1.0);
    node.failure_prob =
        std::clamp(rng.uniform(config.failure_prob_init.lo, config.failure_prob_init.hi), 0.0, 1.0);
    node.alive = true;
    state.table.entries.push_back({node.position, 0});
    state.nodes.push_back(node);
  }
  return state;
}

NetworkState spawn_network(const NetworkConfig& config) {
  RngStream rng(config.rng_seed);
  return spawn_network(config, rng);
}

NodeId farthest_node(const NetworkState& state) {
  bool found = false;
  NodeId best = 0;
  double best_dist = -1.0;
  for (const auto& node : state.nodes) {
    if (!node.alive) continue;
    const double d = distance(state.table.position(node.id), state.config.bs_position);
    if (!found || d > best_dist) {
      found = true;
      best = node.id;
      best_dist = d;
    }
  }
  if (!found) throw EmptyNetworkError("farthest_node: no alive node");
  return best;
}

void apply_drift(NetworkState& state, RngStream& rng) {
  const double sigma = state.config.drift_sigma;
  if (sigma == 0.0) return;
  const auto& area = state.config.area;
  for (auto& node : state.nodes) {
    for (int axis = 0; axis < 3; ++axis) {
      const double step = rng.normal(0.0, sigma);
      node.position[axis] = reflect(node.position[axis] + step, area[axis]);
    }
  }
}

EnergyCharges update_localization(NetworkState& state, int round) {
  if (round < 0) throw std::invalid_argument("update_localization: round must be >= 0");
  EnergyCharges charges;
  charges.spent.assign(state.nodes.size(), 0.0);
  if (round % state.config.localization_interval != 0) return charges;
  for (auto& node : state.nodes) {
    if (!node.alive) continue;
    charges.spent[node.id] = deduct_energy(node, state.config.adaptive_energy);
    state.table.entries[node.id] = {node.position, round};
  }
  charges.deaths = mark_exhausted(state);
  return charges;
}

}  // namespace aquachain
