#include <doctest.h>

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "mmfair/report.hpp"
#include "mmfair/sim.hpp"
#include "mmfair/topology_io.hpp"
#include "support/fixtures.hpp"

using namespace mmfair;
using namespace mmfair::testing;
using nlohmann::json;

namespace {

Scenario quiet(int bis) {
  Scenario s;
  s.duration_bi = bis;
  return s;
}

void check_conservation(const std::vector<BiReport>& reports) {
  for (const auto& r : reports) {
    for (const auto& f : r.flows) {
      CHECK(f.total_generated == f.total_delivered + f.total_dropped + f.queued);
    }
  }
}

}  // namespace

TEST_CASE("backlogged six-node delivers its allocation") {
  const Topology t = six_node();
  SimConfig cfg;
  const auto reports = run(t, quiet(6), cfg);
  REQUIRE(reports.size() == 6);
  check_conservation(reports);
  const auto delivered = mean_delivered(reports, 1);
  const auto& last = reports.back();
  for (std::size_t k = 0; k < last.flows.size(); ++k) {
    const double alloc = last.flows[k].allocated_mbps;
    CHECK(std::abs(delivered[k] - alloc) <= 0.05 * alloc);
  }
}

TEST_CASE("constant-rate source below its share is carried in full") {
  Topology t = six_node();
  for (auto& f : t.flows) f.demand_mbps = 300.0;
  const auto reports = run(t, quiet(5), SimConfig{});
  check_conservation(reports);
  for (double d : mean_delivered(reports, 1)) CHECK(d == doctest::Approx(300.0).epsilon(0.01));
}

TEST_CASE("same seed, same run") {
  const Topology t = lamppost();
  SimConfig cfg;
  cfg.seed = 42;
  const auto a = run(t, quiet(3), cfg);
  const auto b = run(t, quiet(3), cfg);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < a[i].flows.size(); ++k) {
      CHECK(a[i].flows[k].delivered == b[i].flows[k].delivered);
      CHECK(a[i].flows[k].max_delay_us == b[i].flows[k].max_delay_us);
    }
  }
}

TEST_CASE("demand change takes effect one interval later") {
  Topology t = six_node();
  for (auto& f : t.flows) f.demand_mbps = 100.0;
  Simulator sim(t, SimConfig{});
  sim.step();
  sim.step();
  const auto before = sim.step({SetDemand{3, 400.0}});
  CHECK(before.flow(3).demand_mbps == 400.0);
  CHECK(before.flow(3).allocated_mbps < 150.0);
  const auto after = sim.step();
  CHECK(after.flow(3).allocated_mbps > 350.0);
  // the relay still forwards one service period of the old rate in this BI
  CHECK(after.flow(3).delivered_mbps > 350.0);
  CHECK(sim.step().flow(3).delivered_mbps == doctest::Approx(400.0).epsilon(0.02));
}

TEST_CASE("attenuation lowers an auto-rate link") {
  Topology t = lamppost();
  Simulator sim(t, SimConfig{});
  const double before = sim.topology().capacity({0, 3});
  sim.step({SetAttenuation{{0, 3}, 12.0}});
  CHECK(sim.topology().capacity({0, 3}) < before);
}

TEST_CASE("reroute drops what was queued on the abandoned links") {
  Topology t = lamppost();
  for (auto& f : t.flows) f.demand_mbps = std::numeric_limits<double>::infinity();
  Simulator sim(t, SimConfig{});
  sim.step();
  sim.step();
  const auto r = sim.step({Reroute{6, {0, 11, 14}}});
  CHECK(r.flow(6).dropped > 0);
  CHECK(sim.topology().find_flow(6)->path == path_from_nodes({0, 11, 14}));
  CHECK(r.flow(6).total_generated == r.flow(6).total_delivered + r.flow(6).total_dropped + r.flow(6).queued);
}

TEST_CASE("ignoring interference causes losses on the interfering links") {
  const Topology t = load_topology(data_path("topologies/lamppost16_interference.json"));
  SimConfig aware;
  SimConfig blind;
  blind.conflict.include_interference = false;
  const auto a = run(t, quiet(4), aware);
  const auto b = run(t, quiet(4), blind);
  std::int64_t la = 0, lb = 0;
  for (const auto& r : a) la += r.interference_losses;
  for (const auto& r : b) lb += r.interference_losses;
  CHECK(la == 0);
  CHECK(lb > 0);
  check_conservation(b);
}

TEST_CASE("queue limit drops at the tail") {
  const Topology t = six_node();
  SimConfig cfg;
  cfg.queue_limit_bytes = 20'000;
  Topology busy = t;
  for (auto& f : busy.flows) f.demand_mbps = 5000.0;
  const auto reports = run(busy, quiet(3), cfg);
  check_conservation(reports);
  std::int64_t drops = 0;
  for (const auto& f : reports.back().flows) drops += f.total_dropped;
  CHECK(drops > 0);
  for (const auto& [node, bytes] : reports.back().peak_queue_bytes) CHECK(bytes <= 20'000 * 3);
}

TEST_CASE("scenario parsing") {
  const Topology t = lamppost();
  SUBCASE("shipped scenarios load") {
    for (const char* name : {"static", "demand_step", "shared_link_degradation", "reroute"}) {
      CHECK_NOTHROW(load_scenario(data_path(std::string("scenarios/") + name + ".json"), t));
    }
  }
  SUBCASE("round trip") {
    const Scenario s = load_scenario(data_path("scenarios/reroute.json"), t);
    const Scenario back = parse_scenario(scenario_to_json(s), t);
    REQUIRE(back.events.size() == s.events.size());
    for (std::size_t i = 0; i < s.events.size(); ++i) {
      CHECK(back.events[i].bi == s.events[i].bi);
      CHECK(describe(back.events[i].event) == describe(s.events[i].event));
    }
  }
  SUBCASE("bad references are rejected") {
    const json unknown_flow = json::parse(
        R"({"duration_bi": 3, "events": [{"bi": 1, "type": "set_demand", "flow": 99, "demand_mbps": 5}]})");
    CHECK_THROWS_AS(parse_scenario(unknown_flow, t), LoadError);
    const json late = json::parse(
        R"({"duration_bi": 3, "events": [{"bi": 3, "type": "set_demand", "flow": 1, "demand_mbps": 5}]})");
    CHECK_THROWS_AS(parse_scenario(late, t), LoadError);
    const json bad_path = json::parse(
        R"({"duration_bi": 3, "events": [{"bi": 0, "type": "reroute", "flow": 6, "path": [0, 13]}]})");
    CHECK_THROWS_AS(parse_scenario(bad_path, t), LoadError);
  }
}

TEST_CASE("sim config validation") {
  SimConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.packet_bytes = 0;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("shipped scenarios schedule without rescaling") {
  const Topology t = lamppost();
  for (const char* name : {"static", "demand_step", "shared_link_degradation", "reroute"}) {
    const auto reports = run(t, load_scenario(data_path(std::string("scenarios/") + name + ".json"), t), SimConfig{});
    for (const auto& r : reports) CHECK(r.schedule_scale == 1.0);
    check_conservation(reports);
  }
}
