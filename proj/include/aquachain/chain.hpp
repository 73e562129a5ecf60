#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aquachain/energy.hpp"
#include "aquachain/network.hpp"

namespace aquachain {

enum class RoutingMode { parametric, baseline };

std::string_view to_string(RoutingMode mode);
// Throws std::invalid_argument for anything but "parametric" / "baseline".
RoutingMode parse_routing_mode(std::string_view text);

// Why the target of a long-link hop was not an ordinary candidate.
enum class LongLinkReason { out_of_range, below_threshold, unavailable };

struct LongLinkEvent {
  NodeId from = 0;
  NodeId to = 0;
  double distance = 0.0;  // table distance
  LongLinkReason reason = LongLinkReason::out_of_range;

  bool operator==(const LongLinkEvent&) const = default;
};

struct Chain {
  std::vector<NodeId> order;
  int built_at_round = 0;
  std::vector<LongLinkEvent> long_links;

  std::size_t size() const { return order.size(); }
  bool operator==(const Chain&) const = default;
};

// Selection inputs for one neighbor, all read from the same table snapshot.
struct CandidateScore {
  NodeId id = 0;
  double hop_energy = 0.0;      // tx cost from the chain tail
  double residual_after = 0.0;  // candidate energy after one rx + one tx at dist
  double dist = 0.0;
  double congestion = 0.0;
  double failure_prob = 0.0;

  bool operator==(const CandidateScore&) const = default;
};

CandidateScore score_candidate(NodeId current, const NodeState& candidate,
                               const NetworkState& state, const EnergyParams& params);

// Alive, unvisited, in range, above threshold, and not flagged unavailable.
std::vector<CandidateScore> eligible_neighbors(NodeId current, const NodeMask& visited,
                                               const NetworkState& state,
                                               const EnergyParams& params,
                                               const NodeMask& unavailable = {});

// Tiered selection:
//   1. min hop energy, max residual, min distance and min congestion at once
//   2. min hop energy and max residual
//   3. min hop energy and min distance
//   4. min hop energy
// The first non-empty tier wins; inside it the lowest failure probability,
// then the lowest id.
std::optional<NodeId> select_next(std::span<const CandidateScore> candidates);

// Parametric chain from the farthest node. When no neighbor qualifies, jumps
// to the unvisited node with the largest projected residual and records a
// long link, so the chain always covers every alive node.
Chain build_chain(const NetworkState& state, const EnergyParams& params,
                  const NodeMask& unavailable = {}, int round = 0);

// PEGASIS-style greedy chain: nearest unvisited node by table distance.
Chain build_greedy_baseline(const NetworkState& state, int round = 0);

// Full rebuild over the current alive set.
Chain reconstruct_chain(const NetworkState& state, const EnergyParams& params, RoutingMode mode,
                        const NodeMask& unavailable = {}, int round = 0);

}  // namespace aquachain
