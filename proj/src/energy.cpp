#include "aquachain/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "aquachain/errors.hpp"

namespace aquachain {

double EnergyParams::default_threshold(const EnergyParams& params, double comm_range) {
  return 2.0 * (rx_energy(params.packet_bits, params) +
                tx_energy(params.packet_bits, comm_range, params));
}

void EnergyParams::validate() const {
  if (!(std::isfinite(e_elec) && e_elec > 0.0)) throw ConfigError("energy.e_elec", "must be > 0");
  if (!(std::isfinite(e_amp) && e_amp > 0.0)) throw ConfigError("energy.e_amp", "must be > 0");
  if (!(std::isfinite(alpha) && alpha >= 1.0)) throw ConfigError("energy.alpha", "must be >= 1");
  if (!(std::isfinite(threshold) && threshold >= 0.0))
    throw ConfigError("energy.threshold", "must be >= 0");
  if (packet_bits == 0) throw ConfigError("energy.packet_bits", "must be > 0");
}

double tx_energy(std::size_t bits, double d, const EnergyParams& params) {
  if (bits == 0) throw std::invalid_argument("tx_energy: bits must be > 0");
  if (!(d >= 0.0)) throw std::invalid_argument("tx_energy: distance must be >= 0");
  const double k = static_cast<double>(bits);
  return k * params.e_elec + k * params.e_amp * std::pow(d, params.alpha);
}

double rx_energy(std::size_t bits, const EnergyParams& params) {
  if (bits == 0) throw std::invalid_argument("rx_energy: bits must be > 0");
  return static_cast<double>(bits) * params.e_elec;
}

double residual_after_hop(const NodeState& node, double d, const EnergyParams& params) {
  return node.energy - rx_energy(params.packet_bits, params) -
         tx_energy(params.packet_bits, d, params);
}

bool passes_threshold(const NodeState& node, double d, const EnergyParams& params) {
  return residual_after_hop(node, d, params) > params.threshold;
}

}  // namespace aquachain
