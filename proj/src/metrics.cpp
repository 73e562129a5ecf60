#include "aquachain/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

#include "aquachain/errors.hpp"

namespace aquachain {

using ordered_json = nlohmann::ordered_json;

LifetimeMetrics compute_lifetime(std::span<const RoundReport> series, std::size_t n) {
  LifetimeMetrics m;
  const std::size_t half = (n + 1) / 2;
  std::size_t dead = 0;
  for (const auto& r : series) {
    if (!r.deaths.empty()) {
      dead += r.deaths.size();
      if (!m.fnd_round) m.fnd_round = r.round;
      if (!m.hnd_round && dead >= half) m.hnd_round = r.round;
      if (!m.lnd_round && dead >= n) m.lnd_round = r.round;
    }
    m.total_energy += r.energy_spent;
    m.total_delivered_bits += r.delivered_bits;
    m.total_long_links += r.long_link_events;
  }
  m.rounds_executed = series.size();
  return m;
}

double throughput(const LifetimeMetrics& m) {
  return m.total_energy > 0.0 ? static_cast<double>(m.total_delivered_bits) / m.total_energy : 0.0;
}

ComparisonReport compare(const SimResult& a, const SimResult& b) {
  if (!(a.config == b.config)) throw ComparisonError("compare: network configs differ");
  if (!(a.params == b.params)) throw ComparisonError("compare: energy params differ");
  if (!(a.initial == b.initial)) throw ComparisonError("compare: spawn states differ");

  ComparisonReport out;
  out.a = compute_lifetime(a.rounds, a.config.n);
  out.b = compute_lifetime(b.rounds, b.config.n);
  if (out.a.fnd_round && out.b.fnd_round)
    out.fnd_delta = static_cast<long long>(*out.a.fnd_round) - *out.b.fnd_round;
  out.energy_delta = out.a.total_energy - out.b.total_energy;
  out.delivered_delta = static_cast<long long>(out.a.total_delivered_bits) -
                        static_cast<long long>(out.b.total_delivered_bits);
  out.throughput_a = throughput(out.a);
  out.throughput_b = throughput(out.b);
  return out;
}

std::optional<double> median(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return (values[mid - 1] + values[mid]) / 2.0;
}

namespace {

template <typename Get>
std::optional<double> median_of(std::span<const ComparisonRow> rows, Get get) {
  std::vector<double> values;
  for (const auto& row : rows)
    if (const std::optional<double> v = get(row.report)) values.push_back(*v);
  return median(std::move(values));
}

std::optional<double> as_double(const std::optional<int>& v) {
  return v ? std::optional<double>(*v) : std::nullopt;
}

}  // namespace

ComparisonMedians summarize(std::span<const ComparisonRow> rows) {
  ComparisonMedians m;
  using R = const ComparisonReport&;
  m.fnd_a = median_of(rows, [](R r) { return as_double(r.a.fnd_round); });
  m.fnd_b = median_of(rows, [](R r) { return as_double(r.b.fnd_round); });
  m.fnd_delta = median_of(rows, [](R r) {
    return r.fnd_delta ? std::optional<double>(static_cast<double>(*r.fnd_delta)) : std::nullopt;
  });
  m.hnd_a = median_of(rows, [](R r) { return as_double(r.a.hnd_round); });
  m.hnd_b = median_of(rows, [](R r) { return as_double(r.b.hnd_round); });
  m.lnd_a = median_of(rows, [](R r) { return as_double(r.a.lnd_round); });
  m.lnd_b = median_of(rows, [](R r) { return as_double(r.b.lnd_round); });
  auto value = [&](auto get) { return median_of(rows, get).value_or(0.0); };
  m.energy_a = value([](R r) { return std::optional<double>(r.a.total_energy); });
  m.energy_b = value([](R r) { return std::optional<double>(r.b.total_energy); });
  m.energy_delta = value([](R r) { return std::optional<double>(r.energy_delta); });
  m.delivered_a =
      value([](R r) { return std::optional<double>(static_cast<double>(r.a.total_delivered_bits)); });
  m.delivered_b =
      value([](R r) { return std::optional<double>(static_cast<double>(r.b.total_delivered_bits)); });
  m.delivered_delta =
      value([](R r) { return std::optional<double>(static_cast<double>(r.delivered_delta)); });
  m.throughput_a = value([](R r) { return std::optional<double>(r.throughput_a); });
  m.throughput_b = value([](R r) { return std::optional<double>(r.throughput_b); });
  return m;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

// --- rounds CSV ---------------------------------------------------------------

RoundRow to_row(const RoundReport& report) {
  return {report.round,          report.leader,           report.energy_spent, report.alive_count,
          report.delivered_bits, report.long_link_events, report.deaths};
}

std::string export_rows(std::span<const RoundRow> rows) {
  std::string out = kRoundsCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.round) + ',' + std::to_string(r.leader) + ',' +
           format_double(r.energy_spent) + ',' + std::to_string(r.alive_count) + ',' +
           std::to_string(r.delivered_bits) + ',' + std::to_string(r.long_link_events) + ',';
    for (std::size_t i = 0; i < r.deaths.size(); ++i) {
      if (i > 0) out += ';';
      out += std::to_string(r.deaths[i]);
    }
    out += '\n';
  }
  return out;
}

std::string export_rounds(std::span<const RoundReport> series) {
  std::vector<RoundRow> rows;
  rows.reserve(series.size());
  for (const auto& r : series) rows.push_back(to_row(r));
  return export_rows(rows);
}

namespace {

template <typename T>
T parse_number(std::string_view field, std::size_t line) {
  T value{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
    throw std::invalid_argument("rounds CSV line " + std::to_string(line) + ": bad number '" +
                                std::string(field) + "'");
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = text.find(sep, start);
    if (at == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, at - start));
    start = at + 1;
  }
}

}  // namespace

std::vector<RoundRow> parse_rounds_csv(const std::string& text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != kRoundsCsvHeader)
    throw std::invalid_argument("rounds CSV: missing or wrong header");

  std::vector<RoundRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    if (fields.size() != 7)
      throw std::invalid_argument("rounds CSV line " + std::to_string(i + 1) +
                                  ": expected 7 fields");
    RoundRow row;
    row.round = parse_number<int>(fields[0], i + 1);
    row.leader = parse_number<NodeId>(fields[1], i + 1);
    row.energy_spent = parse_number<double>(fields[2], i + 1);
    row.alive_count = parse_number<std::size_t>(fields[3], i + 1);
    row.delivered_bits = parse_number<std::size_t>(fields[4], i + 1);
    row.long_link_events = parse_number<std::size_t>(fields[5], i + 1);
    if (!fields[6].empty())
      for (auto id : split(fields[6], ';')) row.deaths.push_back(parse_number<NodeId>(id, i + 1));
    rows.push_back(std::move(row));
  }
  return rows;
}

// --- summary JSON -------------------------------------------------------------

namespace {

ordered_json optional_round(const std::optional<int>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<int> read_optional_round(const ordered_json& j) {
  return j.is_null() ? std::nullopt : std::optional<int>(j.get<int>());
}

}  // namespace

std::string export_summary(const LifetimeMetrics& m, std::uint64_t seed, RoutingMode mode) {
  ordered_json j;
  j["fnd_round"] = optional_round(m.fnd_round);
  j["hnd_round"] = optional_round(m.hnd_round);
  j["lnd_round"] = optional_round(m.lnd_round);
  j["total_energy_j"] = m.total_energy;
  j["total_delivered_bits"] = m.total_delivered_bits;
  j["total_long_links"] = m.total_long_links;
  j["rounds_executed"] = m.rounds_executed;
  j["seed"] = seed;
  j["mode"] = std::string(to_string(mode));
  return j.dump(2) + "\n";
}

SummaryRecord parse_summary(const std::string& text) {
  const auto j = ordered_json::parse(text);
  SummaryRecord s;
  s.metrics.fnd_round = read_optional_round(j.at("fnd_round"));
  s.metrics.hnd_round = read_optional_round(j.at("hnd_round"));
  s.metrics.lnd_round = read_optional_round(j.at("lnd_round"));
  s.metrics.total_energy = j.at("total_energy_j").get<double>();
  s.metrics.total_delivered_bits = j.at("total_delivered_bits").get<std::size_t>();
  s.metrics.total_long_links = j.at("total_long_links").get<std::size_t>();
  s.metrics.rounds_executed = j.at("rounds_executed").get<std::size_t>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.mode = parse_routing_mode(j.at("mode").get<std::string>());
  return s;
}

// --- trace JSON ---------------------------------------------------------------

std::string export_trace(std::span<const TraceEntry> trace) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : trace) {
    ordered_json j;
    j["round"] = e.round;
    j["chain"] = e.chain;
    j["leader"] = e.leader;
    arr.push_back(std::move(j));
  }
  return arr.dump() + "\n";
}

std::vector<TraceEntry> parse_trace(const std::string& text) {
  const auto arr = ordered_json::parse(text);
  std::vector<TraceEntry> out;
  for (const auto& j : arr)
    out.push_back({j.at("round").get<int>(), j.at("chain").get<std::vector<NodeId>>(),
                   j.at("leader").get<NodeId>()});
  return out;
}

// --- batch reports ------------------------------------------------------------

namespace {

std::string cell(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }
std::string cell(const std::optional<long long>& v) { return v ? std::to_string(*v) : ""; }
std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

ordered_json json_or_null(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

std::string export_comparison_csv(std::span<const ComparisonRow> rows,
                                  const ComparisonMedians& m) {
  std::ostringstream out;
  out << "seed,fnd_parametric,fnd_baseline,fnd_delta,hnd_parametric,hnd_baseline,"
         "lnd_parametric,lnd_baseline,energy_parametric_j,energy_baseline_j,energy_delta_j,"
         "delivered_parametric_bits,delivered_baseline_bits,delivered_delta_bits,"
         "throughput_parametric_bits_per_j,throughput_baseline_bits_per_j\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    out << row.seed << ',' << cell(r.a.fnd_round) << ',' << cell(r.b.fnd_round) << ','
        << cell(r.fnd_delta) << ',' << cell(r.a.hnd_round) << ',' << cell(r.b.hnd_round) << ','
        << cell(r.a.lnd_round) << ',' << cell(r.b.lnd_round) << ','
        << format_double(r.a.total_energy) << ',' << format_double(r.b.total_energy) << ','
        << format_double(r.energy_delta) << ',' << r.a.total_delivered_bits << ','
        << r.b.total_delivered_bits << ',' << r.delivered_delta << ','
        << format_double(r.throughput_a) << ',' << format_double(r.throughput_b) << '\n';
  }
  out << "median," << cell(m.fnd_a) << ',' << cell(m.fnd_b) << ',' << cell(m.fnd_delta) << ','
      << cell(m.hnd_a) << ',' << cell(m.hnd_b) << ',' << cell(m.lnd_a) << ',' << cell(m.lnd_b)
      << ',' << format_double(m.energy_a) << ',' << format_double(m.energy_b) << ','
      << format_double(m.energy_delta) << ',' << format_double(m.delivered_a) << ','
      << format_double(m.delivered_b) << ',' << format_double(m.delivered_delta) << ','
      << format_double(m.throughput_a) << ',' << format_double(m.throughput_b) << '\n';
  return out.str();
}

std::string export_comparison_summary(std::span<const ComparisonRow> rows,
                                      const ComparisonMedians& m) {
  ordered_json j;
  j["seeds"] = rows.size();
  j["median_fnd_parametric"] = json_or_null(m.fnd_a);
  j["median_fnd_baseline"] = json_or_null(m.fnd_b);
  j["median_fnd_delta"] = json_or_null(m.fnd_delta);
  j["median_hnd_parametric"] = json_or_null(m.hnd_a);
  j["median_hnd_baseline"] = json_or_null(m.hnd_b);
  j["median_lnd_parametric"] = json_or_null(m.lnd_a);
  j["median_lnd_baseline"] = json_or_null(m.lnd_b);
  j["median_energy_parametric_j"] = m.energy_a;
  j["median_energy_baseline_j"] = m.energy_b;
  j["median_energy_delta_j"] = m.energy_delta;
  j["median_delivered_parametric_bits"] = m.delivered_a;
  j["median_delivered_baseline_bits"] = m.delivered_b;
  j["median_delivered_delta_bits"] = m.delivered_delta;
  j["median_throughput_parametric_bits_per_j"] = m.throughput_a;
  j["median_throughput_baseline_bits_per_j"] = m.throughput_b;
  return j.dump(2) + "\n";
}

std::string export_sweep_csv(const std::string& param, std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << param
      << ",fnd_round,hnd_round,lnd_round,total_energy_j,total_delivered_bits,total_long_links,"
         "rounds_executed,seed,mode\n";
  for (const auto& row : rows) {
    const auto& m = row.summary.metrics;
    out << format_double(row.value) << ',' << cell(m.fnd_round) << ',' << cell(m.hnd_round) << ','
        << cell(m.lnd_round) << ',' << format_double(m.total_energy) << ','
        << m.total_delivered_bits << ',' << m.total_long_links << ',' << m.rounds_executed << ','
        << row.summary.seed << ',' << to_string(row.summary.mode) << '\n';
  }
  return out.str();
}

}  // namespace aquachain
