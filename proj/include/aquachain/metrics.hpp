#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aquachain/simulation.hpp"

namespace aquachain {

struct LifetimeMetrics {
  std::optional<int> fnd_round;  // first node death
  std::optional<int> hnd_round;  // ceil(n/2) nodes dead
  std::optional<int> lnd_round;  // all n nodes dead
  double total_energy = 0.0;
  std::size_t total_delivered_bits = 0;
  std::size_t total_long_links = 0;
  std::size_t rounds_executed = 0;

  bool operator==(const LifetimeMetrics&) const = default;
};

LifetimeMetrics compute_lifetime(std::span<const RoundReport> series, std::size_t n);

// Delivered bits per joule spent; zero when nothing was spent.
double throughput(const LifetimeMetrics& m);

// Paired comparison of two runs that differ only in routing mode.
// Deltas are a - b.
struct ComparisonReport {
  LifetimeMetrics a;
  LifetimeMetrics b;
  std::optional<long long> fnd_delta;
  double energy_delta = 0.0;
  long long delivered_delta = 0;
  double throughput_a = 0.0;
  double throughput_b = 0.0;
};

// Throws ComparisonError unless both runs share config, energy params and
// spawn state.
ComparisonReport compare(const SimResult& a, const SimResult& b);

struct ComparisonRow {
  std::uint64_t seed = 0;
  ComparisonReport report;
};

// Medians over the batch. Death-round medians only consider seeds where the
// death happened; they are empty when none did.
struct ComparisonMedians {
  std::optional<double> fnd_a, fnd_b, fnd_delta;
  std::optional<double> hnd_a, hnd_b;
  std::optional<double> lnd_a, lnd_b;
  double energy_a = 0.0, energy_b = 0.0, energy_delta = 0.0;
  double delivered_a = 0.0, delivered_b = 0.0, delivered_delta = 0.0;
  double throughput_a = 0.0, throughput_b = 0.0;
};

ComparisonMedians summarize(std::span<const ComparisonRow> rows);

std::optional<double> median(std::vector<double> values);

// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

// --- rounds CSV --------------------------------------------------------------

// The CSV projection of a RoundReport.
struct RoundRow {
  int round = 0;
  NodeId leader = 0;
  double energy_spent = 0.0;
  std::size_t alive_count = 0;
  std::size_t delivered_bits = 0;
  std::size_t long_link_events = 0;
  std::vector<NodeId> deaths;

  bool operator==(const RoundRow&) const = default;
};

inline constexpr const char* kRoundsCsvHeader =
    "round,leader,energy_spent,alive_count,delivered_bits,long_link_events,deaths";

RoundRow to_row(const RoundReport& report);
// Deaths are ';'-separated inside their field.
std::string export_rounds(std::span<const RoundReport> series);
std::string export_rows(std::span<const RoundRow> rows);
std::vector<RoundRow> parse_rounds_csv(const std::string& text);

// --- summary JSON ------------------------------------------------------------

struct SummaryRecord {
  LifetimeMetrics metrics;
  std::uint64_t seed = 0;
  RoutingMode mode = RoutingMode::parametric;

  bool operator==(const SummaryRecord&) const = default;
};

std::string export_summary(const LifetimeMetrics& metrics, std::uint64_t seed, RoutingMode mode);
SummaryRecord parse_summary(const std::string& text);

// --- trace JSON --------------------------------------------------------------

std::string export_trace(std::span<const TraceEntry> trace);
std::vector<TraceEntry> parse_trace(const std::string& text);

// --- batch reports -----------------------------------------------------------

std::string export_comparison_csv(std::span<const ComparisonRow> rows,
                                  const ComparisonMedians& medians);
std::string export_comparison_summary(std::span<const ComparisonRow> rows,
                                      const ComparisonMedians& medians);

struct SweepRow {
  double value = 0.0;
  SummaryRecord summary;
};

std::string export_sweep_csv(const std::string& param, std::span<const SweepRow> rows);

}  // namespace aquachain
