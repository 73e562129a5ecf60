#include "aquachain/rng.hpp"

#include <cmath>
#include <numbers>

namespace aquachain {

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RngStream::normal(double mean, double stddev) {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return mean + stddev * z;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  return mean + stddev * r * std::cos(theta);
}

bool RngStream::bernoulli(double p) { return uniform() < p; }

}  // namespace aquachain
