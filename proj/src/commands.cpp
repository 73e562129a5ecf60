#include "aquachain/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <ostream>
#include <thread>

#include "aquachain/errors.hpp"
#include "aquachain/metrics.hpp"

namespace aquachain {

namespace fs = std::filesystem;

std::size_t threads_from_env() {
  const char* raw = std::getenv("AQUACHAIN_THREADS");
  if (raw == nullptr) return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0') return 0;
  return static_cast<std::size_t>(v);
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(count);
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < count && !failed; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < std::min(threads, count); ++t) pool.emplace_back(worker);
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void apply_sweep_value(Scenario& s, const std::string& param, double value) {
  auto is = [&](std::string_view a, std::string_view b) { return param == a || param == b; };
  if (is("threshold", "energy.threshold")) {
    s.energy.threshold = value;
    s.energy.validate();
  } else if (is("alpha", "energy.alpha")) {
    s.energy.alpha = value;
    s.energy.validate();
  } else if (is("drift_sigma", "network.drift_sigma")) {
    s.network.drift_sigma = value;
    s.network.validate();
  } else if (is("localization_interval", "network.localization_interval")) {
    if (value != std::floor(value) || value < 1.0 || value > 1e9)
      throw ConfigError("network.localization_interval", "sweep value must be an integer >= 1");
    s.network.localization_interval = static_cast<int>(value);
    s.network.validate();
  } else if (is("congestion_delta", "sim.congestion_delta")) {
    s.sim.congestion_delta = value;
    s.sim.validate();
  } else if (is("congestion_decay", "sim.congestion_decay")) {
    s.sim.congestion_decay = value;
    s.sim.validate();
  } else {
    throw ConfigError(param, "not a sweepable parameter");
  }
}

namespace {

fs::path resolve(const CommandOptions& opts, const fs::path& p) {
  return opts.out_dir.empty() || p.is_absolute() ? p : opts.out_dir / p;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

// Loads the scenario and applies a single --seeds override.
Scenario load_single(const fs::path& file, const CommandOptions& opts) {
  Scenario s = load_scenario(file);
  if (opts.seeds.size() > 1) throw ConfigError("--seeds", "this command takes at most one seed");
  if (!opts.seeds.empty()) s.network.rng_seed = opts.seeds.front();
  return s;
}

std::size_t worker_count(const CommandOptions& opts) {
  return opts.threads > 0 ? opts.threads : threads_from_env();
}

void write_run_outputs(const Scenario& s, const SimResult& result, const CommandOptions& opts,
                       std::ostream& log) {
  const auto metrics = compute_lifetime(result.rounds, s.network.n);
  const auto rounds_path = resolve(opts, s.output.rounds_csv);
  const auto summary_path = resolve(opts, s.output.summary_json);
  write_file(rounds_path, export_rounds(result.rounds));
  write_file(summary_path, export_summary(metrics, s.network.rng_seed, s.sim.mode));
  log << "wrote " << rounds_path.string() << " and " << summary_path.string() << " ("
      << metrics.rounds_executed << " rounds)\n";
}

// Maps the exception taxonomy onto exit codes.
template <typename F>
int guarded(std::ostream& log, F body) {
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

int cmd_run(const fs::path& file, const CommandOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    const Scenario s = load_single(file, opts);
    const SimResult result = run_simulation(s.network, s.energy, s.sim);
    write_run_outputs(s, result, opts, log);
  });
}

int cmd_trace(const fs::path& file, const CommandOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    Scenario s = load_single(file, opts);
    if (!s.output.trace_json) throw ConfigError("output.trace_json", "required by trace");
    s.sim.record_trace = true;
    const SimResult result = run_simulation(s.network, s.energy, s.sim);
    write_run_outputs(s, result, opts, log);
    const auto trace_path = resolve(opts, *s.output.trace_json);
    write_file(trace_path, export_trace(result.trace));
    log << "wrote " << trace_path.string() << '\n';
  });
}

int cmd_compare(const fs::path& file, const CommandOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    const Scenario base = load_scenario(file);
    std::vector<std::uint64_t> seeds = opts.seeds;
    if (seeds.empty()) seeds.push_back(base.network.rng_seed);

    std::vector<ComparisonRow> rows(seeds.size());
    parallel_for(seeds.size(), worker_count(opts), [&](std::size_t i) {
      Scenario s = base;
      s.network.rng_seed = seeds[i];
      SimParams parametric = s.sim;
      parametric.mode = RoutingMode::parametric;
      SimParams baseline = s.sim;
      baseline.mode = RoutingMode::baseline;
      const SimResult a = run_simulation(s.network, s.energy, parametric);
      const SimResult b = run_simulation(s.network, s.energy, baseline);
      rows[i] = {seeds[i], compare(a, b)};
    });

    const ComparisonMedians medians = summarize(rows);
    const auto csv_path = resolve(opts, "comparison.csv");
    const auto json_path = resolve(opts, "comparison_summary.json");
    write_file(csv_path, export_comparison_csv(rows, medians));
    write_file(json_path, export_comparison_summary(rows, medians));
    log << "wrote " << csv_path.string() << " and " << json_path.string() << " ("
        << rows.size() << " seeds)\n";
  });
}

int cmd_sweep(const fs::path& file, const CommandOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    const Scenario base = load_single(file, opts);
    if (opts.param.empty()) throw ConfigError("--param", "required by sweep");
    if (opts.values.empty()) throw ConfigError("--values", "required by sweep");

    // Validate every value before any simulation starts.
    std::vector<Scenario> runs;
    for (double v : opts.values) {
      Scenario s = base;
      apply_sweep_value(s, opts.param, v);
      runs.push_back(std::move(s));
    }

    std::vector<SweepRow> rows(runs.size());
    parallel_for(runs.size(), worker_count(opts), [&](std::size_t i) {
      const Scenario& s = runs[i];
      const SimResult result = run_simulation(s.network, s.energy, s.sim);
      rows[i] = {opts.values[i],
                 {compute_lifetime(result.rounds, s.network.n), s.network.rng_seed, s.sim.mode}};
    });

    const auto csv_path = resolve(opts, "sweep.csv");
    write_file(csv_path, export_sweep_csv(opts.param, rows));
    log << "wrote " << csv_path.string() << " (" << rows.size() << " values)\n";
  });
}

}  // namespace aquachain
