#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "aquachain/errors.hpp"
#include "aquachain/simulation.hpp"
#include "oracles.hpp"

using namespace aquachain;

namespace {

// Hand-built simulation state with static geometry and no randomness in play.
SimState frozen_state(const std::vector<Position>& positions, const Position& bs) {
  SimState s;
  s.network.config.n = positions.size();
  s.network.config.bs_position = bs;
  s.network.config.drift_sigma = 0.0;
  s.network.config.localization_interval = 1000;
  s.network.config.adaptive_energy = 0.0;
  for (NodeId id = 0; id < positions.size(); ++id) {
    s.network.nodes.push_back({id, positions[id], 0.5, 0.0, 0.0, true});
    s.network.table.entries.push_back({positions[id], 0});
  }
  s.unavailable.assign(positions.size(), false);
  return s;
}

NetworkConfig small_config(std::size_t n, std::uint64_t seed = 3) {
  NetworkConfig c;
  c.n = n;
  c.rng_seed = seed;
  return c;
}

}  // namespace

TEST_CASE("leader_for_round") {
  NetworkConfig c = small_config(10);
  auto s = spawn_network(c);
  CHECK(leader_for_round(0, s) == 0);
  CHECK(leader_for_round(12, s) == 2);
  for (NodeId id : {1u, 3u, 5u, 7u, 9u}) s.nodes[id].alive = false;
  CHECK(leader_for_round(7, s) == 4);
  for (auto& n : s.nodes) n.alive = false;
  CHECK_THROWS_AS(leader_for_round(0, s), EmptyNetworkError);
}

TEST_CASE("aggregate_fuse keeps one packet length") {
  const Packet own{2000, 1};
  CHECK(aggregate_fuse({}, own) == own);
  const std::vector<Packet> two{{2000, 3}, {2000, 4}};
  CHECK(aggregate_fuse(two, own) == Packet{2000, 8});
  for (std::size_t k = 0; k < 20; ++k) {
    const std::vector<Packet> in(k, Packet{2000, 1});
    CHECK(aggregate_fuse(in, own).bits == 2000);
  }
  const std::vector<Packet> bad{{1000, 1}};
  CHECK_THROWS_AS(aggregate_fuse(bad, own), ProtocolError);
}

TEST_CASE("run_round energy accounting by hand") {
  const EnergyParams p;
  SUBCASE("single node pays only the uplink") {
    auto s = frozen_state({{0, 0, 10}}, {0, 0, 0});
    s.chain.order = {0};
    const auto r = run_round(s);
    CHECK(r.per_node_spent[0] == doctest::Approx(oracle::tx(2000, 10.0, p)).epsilon(1e-14));
    CHECK(r.delivered_bits == 2000);
    CHECK(r.delivered_readings == 1);
    CHECK(s.round == 1);
  }
  SUBCASE("three-node chain with the leader in the middle") {
    auto s = frozen_state({{10, 0, 0}, {20, 0, 0}, {30, 0, 0}}, {0, 0, 0});
    s.chain.order = {0, 1, 2};
    s.round = 1;  // leader = alive[1 mod 3] = node 1
    const auto r = run_round(s);
    REQUIRE(r.leader == 1);
    // Spent amounts are differences of 0.5 J balances, so exact to ~1e-16 J.
    CHECK(r.per_node_spent[0] == doctest::Approx(1.2e-4).epsilon(1e-11));
    CHECK(r.per_node_spent[2] == doctest::Approx(1.2e-4).epsilon(1e-11));
    // two receptions (1e-4 each) + uplink over 20 m (1e-4 + 8e-5)
    CHECK(r.per_node_spent[1] == doctest::Approx(3.8e-4).epsilon(1e-11));
    CHECK(r.energy_spent == doctest::Approx(6.2e-4).epsilon(1e-11));
    CHECK(r.delivered_readings == 3);
    CHECK(r.per_node_relayed == std::vector<std::size_t>{0, 2, 0});
  }
  SUBCASE("leader at a chain end receives once") {
    auto s = frozen_state({{10, 0, 0}, {20, 0, 0}, {30, 0, 0}}, {0, 0, 0});
    s.chain.order = {0, 1, 2};
    const auto r = run_round(s);  // round 0: leader node 0
    REQUIRE(r.leader == 0);
    CHECK(r.per_node_relayed == std::vector<std::size_t>{1, 1, 0});
    CHECK(r.per_node_spent[0] == doctest::Approx(1e-4 + oracle::tx(2000, 10.0, p)));
    CHECK(r.per_node_spent[1] == doctest::Approx(1e-4 + oracle::tx(2000, 10.0, p)));
    CHECK(r.per_node_spent[2] == doctest::Approx(oracle::tx(2000, 10.0, p)));
  }
  SUBCASE("a leader that cannot afford the uplink delivers nothing") {
    auto s = frozen_state({{10, 0, 0}, {20, 0, 0}}, {0, 0, 0});
    s.chain.order = {1, 0};
    s.network.nodes[0].energy = 1.5e-4;
    const auto r = run_round(s);
    CHECK(r.delivered_bits == 0);
    CHECK(r.deaths == std::vector<NodeId>{0});
    CHECK(s.chain.order == std::vector<NodeId>{1});
  }
  SUBCASE("all dead at entry") {
    auto s = frozen_state({{10, 0, 0}}, {0, 0, 0});
    s.network.nodes[0].alive = false;
    CHECK_THROWS_AS(run_round(s), SimulationComplete);
  }
}

TEST_CASE("sample_transient_failures") {
  NetworkConfig c = small_config(20);
  SimState s = init_simulation(c, EnergyParams{}, SimParams{});
  SUBCASE("never") {
    for (auto& n : s.network.nodes) n.failure_prob = 0.0;
    for (int i = 0; i < 50; ++i) {
      const auto m = sample_transient_failures(s);
      CHECK(std::none_of(m.begin(), m.end(), [](bool b) { return b; }));
    }
  }
  SUBCASE("always, alive only") {
    for (auto& n : s.network.nodes) n.failure_prob = 1.0;
    s.network.nodes[4].alive = false;
    const auto m = sample_transient_failures(s);
    for (NodeId id = 0; id < 20; ++id) CHECK(m[id] == (id != 4));
  }
  SUBCASE("empirical rate") {
    for (auto& n : s.network.nodes) n.failure_prob = 0.1;
    std::size_t hits = 0;
    for (int i = 0; i < 500; ++i) {
      const auto m = sample_transient_failures(s);
      hits += static_cast<std::size_t>(std::count(m.begin(), m.end(), true));
    }
    CHECK(std::abs(static_cast<double>(hits) / 10000.0 - 0.1) <= 0.01);
  }
}

TEST_CASE("update_congestion") {
  SimState s = frozen_state({{1, 0, 0}, {2, 0, 0}}, {0, 0, 0});
  RoundReport r;
  r.per_node_relayed = {1, 0};
  SUBCASE("bump then decay") {
    s.network.nodes[0].congestion = 0.0;
    s.network.nodes[1].congestion = 0.5;
    update_congestion(s, r);
    CHECK(s.network.nodes[0].congestion == doctest::Approx(0.09));
    CHECK(s.network.nodes[1].congestion == doctest::Approx(0.45));
  }
  SUBCASE("frozen dynamics") {
    s.sim.congestion_delta = 0.0;
    s.sim.congestion_decay = 1.0;
    s.network.nodes[0].congestion = 0.17;
    for (int i = 0; i < 100; ++i) update_congestion(s, r);
    CHECK(s.network.nodes[0].congestion == 0.17);
  }
  SUBCASE("saturates at one") {
    s.sim.congestion_delta = 0.8;
    s.sim.congestion_decay = 1.0;
    r.per_node_relayed = {2, 2};
    update_congestion(s, r);
    CHECK(s.network.nodes[0].congestion == 1.0);
  }
}

TEST_CASE("run_simulation contracts") {
  const EnergyParams p;
  SimParams sim;
  SUBCASE("max_rounds = 0") {
    sim.max_rounds = 0;
    CHECK_THROWS_AS(run_simulation(small_config(4), p, sim), std::invalid_argument);
  }
  SUBCASE("huge energy runs to max_rounds") {
    NetworkConfig c = small_config(4);
    c.initial_energy = 1e6;
    sim.max_rounds = 37;
    const auto r = run_simulation(c, p, sim);
    CHECK(r.rounds.size() == 37);
    CHECK(r.rounds.back().round == 36);
  }
  SUBCASE("deterministic") {
    sim.max_rounds = 400;
    sim.record_trace = true;
    for (auto mode : {RoutingMode::parametric, RoutingMode::baseline}) {
      sim.mode = mode;
      CHECK(run_simulation(small_config(20, 5), p, sim) ==
            run_simulation(small_config(20, 5), p, sim));
    }
  }
}

TEST_CASE("simulation invariants over full lifetimes") {
  EnergyParams p;
  SimParams sim;
  sim.record_trace = true;
  sim.max_rounds = 100000;
  NetworkConfig c = small_config(25, 17);
  c.initial_energy = 0.05;
  c.localization_interval = 4;

  for (auto mode : {RoutingMode::parametric, RoutingMode::baseline}) {
    CAPTURE(to_string(mode));
    sim.mode = mode;
    SimState s = init_simulation(c, p, sim);
    std::vector<bool> dead(c.n, false);
    bool staleness_ok = true, containment_ok = true, congestion_ok = true, silence_ok = true;
    bool conservation_ok = true, freshness_ok = true, monotone_ok = true;
    std::size_t rounds = 0;
    while (s.network.alive_count() > 0) {
      const NetworkState before = s.network;
      for (NodeId id : s.chain.order) freshness_ok = freshness_ok && s.network.nodes[id].alive;
      const RoundReport r = run_round(s);
      ++rounds;

      double decrease = 0.0;
      for (NodeId id = 0; id < c.n; ++id) {
        const double d = before.nodes[id].energy - s.network.nodes[id].energy;
        decrease += d;
        monotone_ok = monotone_ok && d >= 0.0;
        if (dead[id]) silence_ok = silence_ok && r.per_node_spent[id] == 0.0 &&
                                   r.per_node_relayed[id] == 0;
        if (before.nodes[id].alive == false) silence_ok = silence_ok && !s.network.nodes[id].alive;
      }
      conservation_ok =
          conservation_ok && std::abs(r.energy_spent - decrease) <= 1e-12 * std::abs(decrease);
      for (NodeId id : r.deaths) dead[id] = true;

      for (const auto& n : s.network.nodes) {
        containment_ok = containment_ok && inside_box(n.position, c.area);
        congestion_ok = congestion_ok && n.congestion >= 0.0 && n.congestion <= 1.0;
        if (n.alive)
          staleness_ok = staleness_ok &&
                         s.round - s.network.table.at(n.id).last_update_round <
                             c.localization_interval;
      }
      CHECK(r.delivered_bits <= p.packet_bits);
    }
    CHECK(rounds > 10);
    CHECK(conservation_ok);
    CHECK(monotone_ok);
    CHECK(silence_ok);
    CHECK(freshness_ok);
    CHECK(containment_ok);
    CHECK(congestion_ok);
    CHECK(staleness_ok);
  }
}

TEST_CASE("zero drift keeps the table truthful") {
  NetworkConfig c = small_config(15);
  c.drift_sigma = 0.0;
  c.initial_energy = 10.0;
  SimParams sim;
  SimState s = init_simulation(c, EnergyParams{}, sim);
  for (int i = 0; i < 60; ++i) {
    run_round(s);
    for (const auto& n : s.network.nodes) CHECK(s.network.table.position(n.id) == n.position);
  }
}

TEST_CASE("leader fairness and complete fusion") {
  NetworkConfig c = small_config(10);
  c.initial_energy = 100.0;
  c.failure_prob_init = {0.0, 0.0};
  SimParams sim;
  sim.max_rounds = 30;
  const auto result = run_simulation(c, EnergyParams{}, sim);
  std::map<NodeId, int> turns;
  for (const auto& r : result.rounds) {
    ++turns[r.leader];
    CHECK(r.delivered_readings == 10);
  }
  CHECK(turns.size() == 10);
  for (const auto& [id, count] : turns) CHECK(count == 3);
}

TEST_CASE("congestion stays bounded over a long run") {
  NetworkConfig c = small_config(12);
  c.initial_energy = 1e3;
  SimParams sim;
  sim.max_rounds = 10000;
  sim.congestion_delta = 0.6;
  SimState s = init_simulation(c, EnergyParams{}, sim);
  bool ok = true;
  for (int i = 0; i < 10000; ++i) {
    run_round(s);
    for (const auto& n : s.network.nodes) ok = ok && n.congestion >= 0.0 && n.congestion <= 1.0;
  }
  CHECK(ok);
}
