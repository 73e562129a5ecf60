#include "aquachain/chain.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "aquachain/errors.hpp"

namespace aquachain {

std::string_view to_string(RoutingMode mode) {
  return mode == RoutingMode::parametric ? "parametric" : "baseline";
}

RoutingMode parse_routing_mode(std::string_view text) {
  if (text == "parametric") return RoutingMode::parametric;
  if (text == "baseline") return RoutingMode::baseline;
  throw std::invalid_argument("unknown routing mode '" + std::string(text) + "'");
}

CandidateScore score_candidate(NodeId current, const NodeState& candidate,
                               const NetworkState& state, const EnergyParams& params) {
  const double d = distance(state.table.position(current), state.table.position(candidate.id));
  return {candidate.id,
          tx_energy(params.packet_bits, d, params),
          residual_after_hop(candidate, d, params),
          d,
          candidate.congestion,
          candidate.failure_prob};
}

std::vector<CandidateScore> eligible_neighbors(NodeId current, const NodeMask& visited,
                                               const NetworkState& state,
                                               const EnergyParams& params,
                                               const NodeMask& unavailable) {
  std::vector<CandidateScore> out;
  for (const auto& node : state.nodes) {
    if (!node.alive || mask_test(visited, node.id) || mask_test(unavailable, node.id)) continue;
    const CandidateScore score = score_candidate(current, node, state, params);
    if (score.dist > state.config.comm_range) continue;
    if (!(score.residual_after > params.threshold)) continue;
    out.push_back(score);
  }
  return out;
}

std::optional<NodeId> select_next(std::span<const CandidateScore> candidates) {
  if (candidates.empty()) return std::nullopt;

  double min_energy = candidates.front().hop_energy;
  double max_residual = candidates.front().residual_after;
  double min_dist = candidates.front().dist;
  double min_congestion = candidates.front().congestion;
  for (const auto& c : candidates) {
    min_energy = std::min(min_energy, c.hop_energy);
    max_residual = std::max(max_residual, c.residual_after);
    min_dist = std::min(min_dist, c.dist);
    min_congestion = std::min(min_congestion, c.congestion);
  }

  using TierTest = bool (*)(const CandidateScore&, const CandidateScore&);
  // `ref` carries the per-field extrema of the candidate set.
  const TierTest tiers[] = {
      [](const CandidateScore& c, const CandidateScore& ref) {
        return c.hop_energy == ref.hop_energy && c.residual_after == ref.residual_after &&
               c.dist == ref.dist && c.congestion == ref.congestion;
      },
      [](const CandidateScore& c, const CandidateScore& ref) {
        return c.hop_energy == ref.hop_energy && c.residual_after == ref.residual_after;
      },
      [](const CandidateScore& c, const CandidateScore& ref) {
        return c.hop_energy == ref.hop_energy && c.dist == ref.dist;
      },
      [](const CandidateScore& c, const CandidateScore& ref) {
        return c.hop_energy == ref.hop_energy;
      },
  };
  CandidateScore ref;
  ref.hop_energy = min_energy;
  ref.residual_after = max_residual;
  ref.dist = min_dist;
  ref.congestion = min_congestion;

  for (const auto& in_tier : tiers) {
    const CandidateScore* best = nullptr;
    for (const auto& c : candidates) {
      if (!in_tier(c, ref)) continue;
      if (best == nullptr || c.failure_prob < best->failure_prob ||
          (c.failure_prob == best->failure_prob && c.id < best->id))
        best = &c;
    }
    if (best != nullptr) return best->id;
  }
  // Tier 4 always contains the minimum.
  throw ProtocolError("select_next: empty final tier");
}

namespace {

void require_alive(const NetworkState& state) {
  if (state.alive_count() == 0) throw EmptyNetworkError("chain build: no alive node");
}

LongLinkEvent fallback_hop(NodeId current, const NodeMask& visited, const NetworkState& state,
                           const EnergyParams& params, const NodeMask& unavailable) {
  std::optional<CandidateScore> best;
  for (const auto& node : state.nodes) {
    if (!node.alive || mask_test(visited, node.id)) continue;
    const CandidateScore s = score_candidate(current, node, state, params);
    if (!best || s.residual_after > best->residual_after) best = s;
  }
  if (!best) throw ProtocolError("fallback_hop: no unvisited alive node");

  LongLinkReason reason = LongLinkReason::unavailable;
  if (best->dist > state.config.comm_range)
    reason = LongLinkReason::out_of_range;
  else if (!(best->residual_after > params.threshold))
    reason = LongLinkReason::below_threshold;
  else if (!mask_test(unavailable, best->id))
    throw ProtocolError("fallback_hop: target was eligible");
  return {current, best->id, best->dist, reason};
}

}  // namespace

Chain build_chain(const NetworkState& state, const EnergyParams& params,
                  const NodeMask& unavailable, int round) {
  require_alive(state);
  const std::size_t alive = state.alive_count();
  Chain chain;
  chain.built_at_round = round;
  chain.order.reserve(alive);

  NodeMask visited(state.nodes.size(), false);
  NodeId current = farthest_node(state);
  visited[current] = true;
  chain.order.push_back(current);

  while (chain.order.size() < alive) {
    const auto candidates = eligible_neighbors(current, visited, state, params, unavailable);
    if (const auto next = select_next(candidates)) {
      current = *next;
    } else {
      const LongLinkEvent link = fallback_hop(current, visited, state, params, unavailable);
      chain.long_links.push_back(link);
      current = link.to;
    }
    visited[current] = true;
    chain.order.push_back(current);
  }
  return chain;
}

Chain build_greedy_baseline(const NetworkState& state, int round) {
  require_alive(state);
  const std::size_t alive = state.alive_count();
  Chain chain;
  chain.built_at_round = round;
  chain.order.reserve(alive);

  NodeMask visited(state.nodes.size(), false);
  NodeId current = farthest_node(state);
  visited[current] = true;
  chain.order.push_back(current);

  while (chain.order.size() < alive) {
    const Position& here = state.table.position(current);
    bool found = false;
    NodeId best = 0;
    double best_dist = 0.0;
    for (const auto& node : state.nodes) {
      if (!node.alive || visited[node.id]) continue;
      const double d = distance(here, state.table.position(node.id));
      if (!found || d < best_dist) {
        found = true;
        best = node.id;
        best_dist = d;
      }
    }
    current = best;
    visited[current] = true;
    chain.order.push_back(current);
  }
  return chain;
}

Chain reconstruct_chain(const NetworkState& state, const EnergyParams& params, RoutingMode mode,
                        const NodeMask& unavailable, int round) {
  return mode == RoutingMode::parametric ? build_chain(state, params, unavailable, round)
                                         : build_greedy_baseline(state, round);
}

}  // namespace aquachain
