#include "aquachain/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aquachain/errors.hpp"

namespace aquachain {

void SimParams::validate() const {
  if (max_rounds < 1) throw ConfigError("sim.max_rounds", "must be >= 1");
  if (!(std::isfinite(congestion_delta) && congestion_delta >= 0.0))
    throw ConfigError("sim.congestion_delta", "must be >= 0");
  if (!(congestion_decay >= 0.0 && congestion_decay <= 1.0))
    throw ConfigError("sim.congestion_decay", "must lie in [0, 1]");
}

Packet aggregate_fuse(std::span<const Packet> incoming, const Packet& own) {
  Packet out = own;
  for (const auto& p : incoming) {
    if (p.bits != own.bits) throw ProtocolError("aggregate_fuse: packet length mismatch");
    out.readings += p.readings;
  }
  return out;
}

SimState init_simulation(const NetworkConfig& config, const EnergyParams& params,
                         const SimParams& sim) {
  params.validate();
  sim.validate();
  SimState state;
  state.rng = RngStream(config.rng_seed);
  state.network = spawn_network(config, state.rng);
  state.params = params;
  state.sim = sim;
  state.unavailable.assign(config.n, false);
  state.chain = reconstruct_chain(state.network, params, sim.mode, state.unavailable, 0);
  state.pending_long_links = state.chain.long_links.size();
  return state;
}

NodeId leader_for_round(int round, const NetworkState& state) {
  if (round < 0) throw std::invalid_argument("leader_for_round: round must be >= 0");
  const auto alive = state.alive_ids();
  if (alive.empty()) throw EmptyNetworkError("leader_for_round: no alive node");
  return alive[static_cast<std::size_t>(round) % alive.size()];
}

NodeMask sample_transient_failures(SimState& state) {
  NodeMask failed(state.network.nodes.size(), false);
  for (const auto& node : state.network.nodes)
    if (node.alive && state.rng.bernoulli(node.failure_prob)) failed[node.id] = true;
  return failed;
}

void update_congestion(SimState& state, const RoundReport& report) {
  const double delta = state.sim.congestion_delta;
  const double decay = state.sim.congestion_decay;
  for (auto& node : state.network.nodes) {
    double c = node.congestion;
    if (node.id < report.per_node_relayed.size() && report.per_node_relayed[node.id] > 0)
      c = std::min(1.0, c + delta * static_cast<double>(report.per_node_relayed[node.id]));
    node.congestion = std::clamp(decay * c, 0.0, 1.0);
  }
}

namespace {

class RoundLedger {
 public:
  RoundLedger(NetworkState& network, RoundReport& report) : network_(network), report_(report) {}

  // Charges the node; returns whether it could pay in full.
  bool charge(NodeId id, double joules) {
    NodeState& node = network_.nodes[id];
    const bool affordable = node.energy >= joules;
    report_.per_node_spent[id] += deduct_energy(node, joules);
    return affordable;
  }

 private:
  NetworkState& network_;
  RoundReport& report_;
};

// Drains one arm of the chain toward the leader. `arm` lists the nodes from
// the chain end inward; the last hop goes to `leader`.
Packet drain_arm(std::span<const NodeId> arm, NodeId leader, SimState& state,
                 RoundReport& report, RoundLedger& ledger) {
  const auto& params = state.params;
  const std::size_t bits = params.packet_bits;
  const auto& nodes = state.network.nodes;
  Packet carried{bits, 0};
  for (std::size_t i = 0; i < arm.size(); ++i) {
    const NodeId id = arm[i];
    const Packet own{bits, mask_test(state.unavailable, id) ? 0u : 1u};
    if (i == 0) {
      carried = own;
    } else {
      ledger.charge(id, rx_energy(bits, params));
      ++report.per_node_relayed[id];
      carried = aggregate_fuse(std::span<const Packet>(&carried, 1), own);
    }
    const NodeId next = i + 1 < arm.size() ? arm[i + 1] : leader;
    ledger.charge(id, tx_energy(bits, distance(nodes[id].position, nodes[next].position), params));
  }
  return carried;
}

}  // namespace

RoundReport run_round(SimState& state) {
  NetworkState& net = state.network;
  if (net.alive_count() == 0) throw SimulationComplete("run_round: every node is dead");

  const std::size_t n = net.nodes.size();
  RoundReport report;
  report.round = state.round;
  report.per_node_spent.assign(n, 0.0);
  report.per_node_relayed.assign(n, 0);
  report.long_link_events = state.pending_long_links;
  state.pending_long_links = 0;
  RoundLedger ledger(net, report);

  // (1) transient failures
  state.unavailable = sample_transient_failures(state);
  for (NodeId id = 0; id < n; ++id)
    if (state.unavailable[id]) report.transient_failures.push_back(id);

  // (2) leader
  const NodeId leader = leader_for_round(state.round, net);
  report.leader = leader;

  // (3) both arms drain toward the leader
  const auto& order = state.chain.order;
  const auto at = std::find(order.begin(), order.end(), leader);
  if (at == order.end()) throw ProtocolError("run_round: leader is not on the chain");
  const auto pos = static_cast<std::size_t>(at - order.begin());

  const std::size_t bits = state.params.packet_bits;
  std::vector<Packet> arrivals;
  if (pos > 0) {
    const std::vector<NodeId> left(order.begin(), order.begin() + pos);
    arrivals.push_back(drain_arm(left, leader, state, report, ledger));
  }
  if (pos + 1 < order.size()) {
    const std::vector<NodeId> right(order.rbegin(), order.rend() - pos - 1);
    arrivals.push_back(drain_arm(right, leader, state, report, ledger));
  }

  // (4) leader fuses and uplinks
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    ledger.charge(leader, rx_energy(bits, state.params));
    ++report.per_node_relayed[leader];
  }
  const Packet own{bits, mask_test(state.unavailable, leader) ? 0u : 1u};
  const Packet fused = aggregate_fuse(arrivals, own);
  const double uplink =
      tx_energy(bits, distance(net.nodes[leader].position, net.config.bs_position), state.params);
  if (ledger.charge(leader, uplink)) {
    report.delivered_bits = fused.bits;
    report.delivered_readings = fused.readings;
  }

  // (5) congestion, (6) deaths
  update_congestion(state, report);
  report.deaths = mark_exhausted(net);

  // (7) drift, (8) localization stamped with the round about to start
  apply_drift(net, state.rng);
  const int next_round = state.round + 1;
  const EnergyCharges loc = update_localization(net, next_round);
  for (NodeId id = 0; id < n; ++id) report.per_node_spent[id] += loc.spent[id];
  report.deaths.insert(report.deaths.end(), loc.deaths.begin(), loc.deaths.end());

  // (9) rebuild on death or alongside each table refresh
  const bool scheduled = next_round % net.config.localization_interval == 0;
  if (net.alive_count() == 0) {
    state.chain = Chain{{}, next_round, {}};
  } else if (!report.deaths.empty() || scheduled) {
    state.chain =
        reconstruct_chain(net, state.params, state.sim.mode, state.unavailable, next_round);
    report.long_link_events += state.chain.long_links.size();
  }

  for (double spent : report.per_node_spent) report.energy_spent += spent;
  report.alive_count = net.alive_count();

  // (10)
  state.round = next_round;
  return report;
}

SimResult run_simulation(const NetworkConfig& config, const EnergyParams& params,
                         const SimParams& sim) {
  if (sim.max_rounds < 1) throw std::invalid_argument("run_simulation: max_rounds must be >= 1");
  SimState state = init_simulation(config, params, sim);

  SimResult result;
  result.config = config;
  result.params = params;
  result.sim = sim;
  result.initial = state.network;
  result.rounds.reserve(std::min<std::size_t>(sim.max_rounds, 1u << 16));
  while (result.rounds.size() < sim.max_rounds && state.network.alive_count() > 0) {
    std::vector<NodeId> chain = state.chain.order;
    RoundReport report = run_round(state);
    if (sim.record_trace) result.trace.push_back({report.round, std::move(chain), report.leader});
    result.rounds.push_back(std::move(report));
  }
  result.final_state = state.network;
  return result;
}

}  // namespace aquachain
