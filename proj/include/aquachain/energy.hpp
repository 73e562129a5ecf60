#pragma once

#include <cstddef>

#include "aquachain/network.hpp"

namespace aquachain {

// First-order radio model: a transmission of k bits over d meters costs
// k*e_elec + k*e_amp*d^alpha, a reception costs k*e_elec.
struct EnergyParams {
  double e_elec = 5e-8;   // J/bit
  double e_amp = 1e-10;   // J/bit/m^alpha
  double alpha = 2.0;
  // Minimum residual a candidate must keep after a hop. The default is
  // default_threshold() at the default 40 m range, spelled out term by term
  // so both evaluate to the same double.
  double threshold = 2.0 * (2000.0 * 5e-8 + (2000.0 * 5e-8 + 2000.0 * 1e-10 * 1600.0));
  std::size_t packet_bits = 2000;

  // Twice the cost of one receive plus one transmit at full range, so an
  // admitted node can finish at least one more relay.
  static double default_threshold(const EnergyParams& params, double comm_range);

  void validate() const;

  bool operator==(const EnergyParams&) const = default;
};

double tx_energy(std::size_t bits, double d, const EnergyParams& params);
double rx_energy(std::size_t bits, const EnergyParams& params);

// node.energy - rx - tx(d) for one packet; negative when the node cannot
// afford the hop.
double residual_after_hop(const NodeState& node, double d, const EnergyParams& params);

bool passes_threshold(const NodeState& node, double d, const EnergyParams& params);

}  // namespace aquachain
