#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace aquachain {

// Seeded pseudo-random stream. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the distributions are implemented here
// rather than taken from <random> because the standard distributions are
// allowed to differ between library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on [lo, hi); returns lo when lo == hi.
  double uniform(double lo, double hi);
  // Box-Muller; the second variate of each pair is cached.
  double normal(double mean, double stddev);
  bool bernoulli(double p);

  bool operator==(const RngStream&) const = default;

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace aquachain
