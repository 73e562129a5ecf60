#include <doctest.h>

#include <charconv>
#include <cstring>
#include <random>

#include <json.hpp>

#include "aquachain/errors.hpp"
#include "aquachain/metrics.hpp"

using namespace aquachain;

namespace {

RoundReport report_at(int round, std::vector<NodeId> deaths = {}, double spent = 1e-3) {
  RoundReport r;
  r.round = round;
  r.leader = static_cast<NodeId>(round % 4);
  r.energy_spent = spent;
  r.deaths = std::move(deaths);
  r.delivered_bits = 2000;
  r.long_link_events = round % 3 == 0 ? 1 : 0;
  r.alive_count = 4;
  return r;
}

SimResult small_run(RoutingMode mode, std::uint64_t seed = 9) {
  NetworkConfig c;
  c.n = 12;
  c.rng_seed = seed;
  c.initial_energy = 0.02;
  SimParams sim;
  sim.mode = mode;
  sim.max_rounds = 5000;
  return run_simulation(c, EnergyParams{}, sim);
}

}  // namespace

TEST_CASE("compute_lifetime") {
  SUBCASE("no deaths") {
    const std::vector<RoundReport> s{report_at(0), report_at(1)};
    const auto m = compute_lifetime(s, 4);
    CHECK_FALSE(m.fnd_round);
    CHECK_FALSE(m.hnd_round);
    CHECK_FALSE(m.lnd_round);
    CHECK(m.rounds_executed == 2);
  }
  SUBCASE("synthetic death series") {
    std::vector<RoundReport> s;
    for (int r = 0; r < 50; ++r) {
      std::vector<NodeId> deaths;
      if (r == 37) deaths = {2};
      if (r == 40) deaths = {0};
      if (r == 41) deaths = {3};
      if (r == 44) deaths = {1};
      s.push_back(report_at(r, deaths));
    }
    const auto m = compute_lifetime(s, 4);
    CHECK(m.fnd_round == 37);
    CHECK(m.hnd_round == 40);
    CHECK(m.lnd_round == 44);
    CHECK(m.total_delivered_bits == 100000);
    CHECK(m.total_long_links == 17);
    double sum = 0.0;
    for (const auto& r : s) sum += r.energy_spent;
    CHECK(m.total_energy == sum);
  }
  SUBCASE("odd population rounds half up") {
    const std::vector<RoundReport> s{report_at(3, {0}), report_at(5, {1}), report_at(6, {2})};
    CHECK(compute_lifetime(s, 5).hnd_round == 6);
  }
  SUBCASE("empty") {
    const auto m = compute_lifetime({}, 10);
    CHECK(m == LifetimeMetrics{});
  }
  SUBCASE("ordering on real runs") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto r = small_run(RoutingMode::parametric, seed);
      const auto m = compute_lifetime(r.rounds, r.config.n);
      REQUIRE(m.fnd_round);
      REQUIRE(m.lnd_round);
      CHECK(*m.fnd_round <= *m.hnd_round);
      CHECK(*m.hnd_round <= *m.lnd_round);
    }
  }
}

TEST_CASE("compare") {
  const auto a = small_run(RoutingMode::parametric);
  const auto b = small_run(RoutingMode::baseline);
  SUBCASE("self comparison") {
    const auto r = compare(a, a);
    CHECK(r.fnd_delta == 0);
    CHECK(r.energy_delta == 0.0);
    CHECK(r.delivered_delta == 0);
  }
  SUBCASE("paired modes") {
    const auto r = compare(a, b);
    const auto ma = compute_lifetime(a.rounds, 12);
    const auto mb = compute_lifetime(b.rounds, 12);
    CHECK(r.fnd_delta == *ma.fnd_round - *mb.fnd_round);
    CHECK(r.energy_delta == ma.total_energy - mb.total_energy);
    CHECK(r.delivered_delta ==
          static_cast<long long>(ma.total_delivered_bits) -
              static_cast<long long>(mb.total_delivered_bits));
    CHECK(r.throughput_a == doctest::Approx(ma.total_delivered_bits / ma.total_energy));
    CHECK(a.initial == b.initial);
  }
  SUBCASE("mismatched configs") {
    CHECK_THROWS_AS(compare(a, small_run(RoutingMode::baseline, 10)), ComparisonError);
  }
}

TEST_CASE("median and batch summary") {
  CHECK_FALSE(median({}));
  CHECK(median({3.0}) == 3.0);
  CHECK(median({4.0, 1.0, 3.0}) == 3.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);

  std::vector<ComparisonRow> rows;
  for (std::uint64_t seed = 1; seed <= 3; ++seed)
    rows.push_back({seed, compare(small_run(RoutingMode::parametric, seed),
                                  small_run(RoutingMode::baseline, seed))});
  const auto m = summarize(rows);
  std::vector<double> fnd;
  for (const auto& r : rows) fnd.push_back(*r.report.a.fnd_round);
  CHECK(m.fnd_a == median(fnd));

  const auto csv = export_comparison_csv(rows, m);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 3 rows + median
  CHECK(csv.find("\nmedian,") != std::string::npos);
  const auto j = nlohmann::json::parse(export_comparison_summary(rows, m));
  CHECK(j.at("seeds") == 3);
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.2e-4) == "0.00012");
  std::mt19937_64 gen(1);
  for (int i = 0; i < 2000; ++i) {
    double v;
    const auto bits = gen();
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) continue;
    const std::string text = format_double(v);
    double back = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    CHECK(back == v);
  }
}

TEST_CASE("rounds CSV") {
  SUBCASE("empty series is the header") {
    CHECK(export_rounds({}) == std::string(kRoundsCsvHeader) + "\n");
    CHECK(parse_rounds_csv(export_rounds({})).empty());
  }
  SUBCASE("one round") {
    const std::vector<RoundReport> s{report_at(7, {1, 3}, 3.3e-4)};
    const auto text = export_rounds(s);
    CHECK(text == std::string(kRoundsCsvHeader) + "\n7,3,0.00033,4,2000,0,1;3\n");
    const auto rows = parse_rounds_csv(text);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0] == to_row(s[0]));
  }
  SUBCASE("export-parse-export is byte identical") {
    const auto r = small_run(RoutingMode::parametric);
    const auto text = export_rounds(r.rounds);
    CHECK(export_rows(parse_rounds_csv(text)) == text);
  }
  SUBCASE("malformed") {
    CHECK_THROWS(parse_rounds_csv("round,leader\n"));
    CHECK_THROWS(parse_rounds_csv(std::string(kRoundsCsvHeader) + "\n1,2,x,4,5,6,\n"));
  }
}

TEST_CASE("summary JSON") {
  const auto r = small_run(RoutingMode::baseline);
  const auto m = compute_lifetime(r.rounds, r.config.n);
  const auto text = export_summary(m, 9, RoutingMode::baseline);

  const auto j = nlohmann::ordered_json::parse(text);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"fnd_round", "hnd_round", "lnd_round", "total_energy_j",
                                         "total_delivered_bits", "total_long_links",
                                         "rounds_executed", "seed", "mode"});
  CHECK(j.at("total_energy_j").get<double>() == m.total_energy);
  CHECK(j.at("mode") == "baseline");

  const auto back = parse_summary(text);
  CHECK(back.metrics == m);
  CHECK(back.seed == 9);
  CHECK(export_summary(back.metrics, back.seed, back.mode) == text);

  const auto none = export_summary(LifetimeMetrics{}, 1, RoutingMode::parametric);
  CHECK(nlohmann::json::parse(none).at("fnd_round").is_null());
  CHECK(parse_summary(none).metrics == LifetimeMetrics{});
}

TEST_CASE("trace JSON") {
  const std::vector<TraceEntry> t{{0, {3, 1, 2}, 1}, {1, {3, 2}, 3}};
  const auto text = export_trace(t);
  CHECK(text == "[{\"round\":0,\"chain\":[3,1,2],\"leader\":1},"
                "{\"round\":1,\"chain\":[3,2],\"leader\":3}]\n");
  CHECK(parse_trace(text) == t);
  CHECK(export_trace(parse_trace(text)) == text);
  CHECK(export_trace({}) == "[]\n");
}

TEST_CASE("sweep CSV keeps row order") {
  std::vector<SweepRow> rows{{2.0, {}}, {0.5, {}}};
  rows[0].summary.metrics.fnd_round = 12;
  const auto csv = export_sweep_csv("threshold", rows);
  CHECK(csv.rfind("threshold,fnd_round,", 0) == 0);
  CHECK(csv.find("\n2,12,") < csv.find("\n0.5,,"));
}
