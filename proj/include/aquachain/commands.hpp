#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "aquachain/scenario.hpp"

namespace aquachain {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct CommandOptions {
  std::vector<std::uint64_t> seeds;  // overrides network.rng_seed when non-empty
  std::filesystem::path out_dir;     // relative output paths resolve against it
  std::string param;
  std::vector<double> values;
  std::size_t threads = 0;  // 0 = sequential
};

// AQUACHAIN_THREADS, or 0 when unset or unparsable.
std::size_t threads_from_env();

int cmd_run(const std::filesystem::path& scenario, const CommandOptions& opts, std::ostream& log);
int cmd_trace(const std::filesystem::path& scenario, const CommandOptions& opts,
              std::ostream& log);
int cmd_compare(const std::filesystem::path& scenario, const CommandOptions& opts,
                std::ostream& log);
int cmd_sweep(const std::filesystem::path& scenario, const CommandOptions& opts,
              std::ostream& log);

// Applies a sweep value to the named field ("threshold", "energy.threshold",
// "alpha", "drift_sigma", "localization_interval", "congestion_delta",
// "congestion_decay" and their dotted forms). Throws ConfigError for unknown
// names or values that break the field's invariant.
void apply_sweep_value(Scenario& scenario, const std::string& param, double value);

// Runs fn(0..count-1) on up to `threads` workers; sequential when threads <= 1.
// The first exception (by index) is rethrown after all work stops.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace aquachain
