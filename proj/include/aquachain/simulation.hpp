#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "aquachain/chain.hpp"
#include "aquachain/energy.hpp"
#include "aquachain/network.hpp"
#include "aquachain/rng.hpp"

namespace aquachain {

struct SimParams {
  RoutingMode mode = RoutingMode::parametric;
  std::size_t max_rounds = 10000;
  double congestion_delta = 0.1;  // bump per relayed packet
  double congestion_decay = 0.9;  // geometric decay applied every round
  bool record_trace = false;

  void validate() const;

  bool operator==(const SimParams&) const = default;
};

// Only the length and the number of fused readings are modeled.
struct Packet {
  std::size_t bits = 0;
  std::size_t readings = 0;

  bool operator==(const Packet&) const = default;
};

// Fuses incoming packets with the node's own into one packet of the same
// length. Throws ProtocolError on a length mismatch.
Packet aggregate_fuse(std::span<const Packet> incoming, const Packet& own);

struct RoundReport {
  int round = 0;
  NodeId leader = 0;
  double energy_spent = 0.0;            // sum of per_node_spent
  std::vector<double> per_node_spent;   // indexed by id
  std::vector<std::size_t> per_node_relayed;
  std::vector<NodeId> deaths;
  std::size_t delivered_bits = 0;
  std::size_t delivered_readings = 0;
  std::size_t long_link_events = 0;
  std::vector<NodeId> transient_failures;
  std::size_t alive_count = 0;  // after the round

  bool operator==(const RoundReport&) const = default;
};

struct SimState {
  int round = 0;
  NetworkState network;
  Chain chain;
  EnergyParams params;
  SimParams sim;
  RngStream rng{0};
  // Nodes that failed transiently in the latest round.
  NodeMask unavailable;
  // Long links from builds that no report has counted yet.
  std::size_t pending_long_links = 0;
};

// Spawns the network from config.rng_seed and builds the first chain.
SimState init_simulation(const NetworkConfig& config, const EnergyParams& params,
                         const SimParams& sim);

// Leader rotation over the sorted alive set: alive[round mod |alive|].
NodeId leader_for_round(int round, const NetworkState& state);

NodeMask sample_transient_failures(SimState& state);

// Relayed-packet bump followed by decay, clamped to [0, 1].
void update_congestion(SimState& state, const RoundReport& report);

// One gather-and-deliver cycle. Throws SimulationComplete when every node
// is already dead.
RoundReport run_round(SimState& state);

struct TraceEntry {
  int round = 0;
  std::vector<NodeId> chain;
  NodeId leader = 0;

  bool operator==(const TraceEntry&) const = default;
};

struct SimResult {
  NetworkConfig config;
  EnergyParams params;
  SimParams sim;
  NetworkState initial;
  NetworkState final_state;
  std::vector<RoundReport> rounds;
  std::vector<TraceEntry> trace;  // filled when sim.record_trace is set

  bool operator==(const SimResult&) const = default;
};

// Runs until every node is dead or max_rounds rounds have executed.
SimResult run_simulation(const NetworkConfig& config, const EnergyParams& params,
                         const SimParams& sim);

}  // namespace aquachain
