#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mmfair/allocator.hpp"
#include "mmfair/metrics.hpp"
#include "support/fixtures.hpp"
#include "support/instances.hpp"
#include "support/oracle.hpp"

using namespace mmfair;
using namespace mmfair::testing;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void check_feasible(const AllocationVector& a, const Topology& t, const CliqueSet& cliques, double budget) {
  for (const auto& c : cliques) CHECK(a.clique_airtime(c) <= budget + 1e-9);
  for (const auto& f : t.flows) {
    CHECK(a.rate(f.id) >= 0.0);
    CHECK(a.rate(f.id) <= f.demand_mbps + 1e-9);
  }
}

}  // namespace

// Independent exact water-filling (tests/oracle/maxmin.py) gives
// 763.4458 / 763.4458 / 1503.5373 for the six-node backhaul at full budget.
TEST_CASE("six-node max-min rates") {
  const Topology t = six_node();
  const auto cliques = cliques_of(t);
  const auto a = progressive_filling(t, cliques, full_budget());
  const double eps = full_budget().epsilon_mbps();
  CHECK(std::abs(a.rate(1) - 763.4458) <= 2 * eps);
  CHECK(std::abs(a.rate(2) - 763.4458) <= 2 * eps);
  CHECK(std::abs(a.rate(3) - 1503.5373) <= 2 * eps);
  CHECK(*gini(std::span<const double>(a.rate_vector())) == doctest::Approx(0.1628).epsilon(1e-3));
  CHECK(verify_max_min(a, t, cliques, full_budget()).max_min_fair);
}

TEST_CASE("six-node round robin splits each clique evenly") {
  const Topology t = six_node();
  const auto a = round_robin_allocation(t, cliques_of(t), full_budget());
  CHECK(a.rate(1) == doctest::Approx(1155.0 / 4));
  CHECK(a.rate(2) == doctest::Approx(6756.0 / 6));
  CHECK(a.rate(3) == doctest::Approx(4620.0 / 6));
}

TEST_CASE("six-node max throughput serves the cheapest flow") {
  const Topology t = six_node();
  const auto a = max_throughput_allocation(t, cliques_of(t), full_budget());
  CHECK(a.rate(1) == doctest::Approx(0.0));
  CHECK(a.rate(2) == doctest::Approx(3378.0));
  CHECK(a.rate(3) == doctest::Approx(0.0));
}

TEST_CASE("beam-training reserve scales a single bottleneck") {
  Topology t;
  t.nodes = {{0, {}, true}, {1, {}, false}};
  t.links = {{0, 1, 1000, 0, false}};
  t.flows = {make_flow(1, {0, 1}, inf)};
  AllocatorConfig cfg;
  cfg.tau = 0.1;
  const auto a = progressive_filling(t, cliques_of(t), cfg);
  CHECK(std::abs(a.rate(1) - 900.0) <= cfg.epsilon_mbps());
  CHECK(a.airtime({1, {0, 1}}) == doctest::Approx(a.rate(1) / 1000.0));
}

TEST_CASE("demand-limited flows release capacity to the others") {
  Topology t;
  t.nodes = {{0, {}, true}, {1, {}, false}, {2, {}, false}};
  t.links = {{0, 1, 1000, 0, false}, {0, 2, 1000, 0, false}};
  t.flows = {make_flow(1, {0, 1}, 100), make_flow(2, {0, 2}, inf)};
  const auto a = progressive_filling(t, cliques_of(t), full_budget());
  CHECK(a.rate(1) == doctest::Approx(100.0));
  CHECK(std::abs(a.rate(2) - 900.0) <= 2 * full_budget().epsilon_mbps());
}

TEST_CASE("zero-capacity link blocks only its flows") {
  Topology t = six_node();
  t.set_capacity({3, 1}, 0.0);
  const auto cliques = cliques_of(t);
  for (auto kind : {AllocatorKind::wihaul, AllocatorKind::max_throughput, AllocatorKind::round_robin}) {
    const auto a = allocate(kind, t, cliques, full_budget());
    CHECK(a.rate(1) == 0.0);
    CHECK(a.blocked.count(1) == 1);
    CHECK(a.rate(2) > 0.0);
  }
}

TEST_CASE("global freeze stops flows outside the saturated clique") {
  Topology t;
  t.nodes = {{0, {}, true}, {1, {}, false}, {2, {}, false}, {3, {}, false}};
  t.links = {{0, 1, 1000, 0, false}, {1, 2, 10, 0, false}, {0, 3, 1000, 0, false}};
  t.flows = {make_flow(1, {0, 1, 2}, inf), make_flow(2, {0, 3}, inf)};
  AllocatorConfig cfg = full_budget();
  const auto cliques = cliques_of(t);
  const auto local = progressive_filling(t, cliques, cfg);
  cfg.freeze_scope = FreezeScope::global;
  const auto global = progressive_filling(t, cliques, cfg);
  for (const auto& a : {local, global}) check_feasible(a, t, cliques, 1.0);
  // relay 1 saturates at r (1/1000 + 1/10) = 1
  const double r1 = 1.0 / (1.0 / 1000 + 1.0 / 10);
  CHECK(std::abs(local.rate(1) - r1) <= 2 * cfg.epsilon_mbps());
  CHECK(std::abs(global.rate(1) - r1) <= 2 * cfg.epsilon_mbps());
  CHECK(std::abs(local.rate(2) - (1000.0 - r1)) <= 2 * cfg.epsilon_mbps());
  CHECK(std::abs(global.rate(2) - r1) <= 2 * cfg.epsilon_mbps());
}

TEST_CASE("progressive filling matches the LP oracle on random trees") {
  std::mt19937_64 rng(2024);
  AllocatorConfig cfg;
  for (int trial = 0; trial < 150; ++trial) {
    const Topology t = random_instance(rng);
    const auto cliques = cliques_of(t);
    const auto a = progressive_filling(t, cliques, cfg);
    const auto expected = lp_max_min(t, cliques, cfg.budget());
    for (const auto& f : t.flows) {
      CHECK(std::abs(a.rate(f.id) - expected.at(f.id)) <= 2 * cfg.epsilon_mbps());
    }
    check_feasible(a, t, cliques, cfg.budget());
    CHECK(verify_max_min(a, t, cliques, cfg).max_min_fair);
  }
}

TEST_CASE("allocator invariants hold for all three strategies") {
  std::mt19937_64 rng(99);
  AllocatorConfig cfg;
  for (int trial = 0; trial < 100; ++trial) {
    const Topology t = random_instance(rng);
    const auto cliques = cliques_of(t);
    const auto pf = progressive_filling(t, cliques, cfg);
    const auto mt = max_throughput_allocation(t, cliques, cfg);
    const auto rr = round_robin_allocation(t, cliques, cfg);
    for (const auto* a : {&pf, &mt, &rr}) {
      check_feasible(*a, t, cliques, cfg.budget());
      for (const auto& [seg, air] : a->airtimes) {
        CHECK(air == doctest::Approx(a->rate(seg.flow) / t.capacity(seg.link)));
      }
    }
    CHECK(mt.total_rate() >= pf.total_rate() * (1 - 1e-6) - 1e-6);
    // max-min never gives its smallest flow less than round robin does
    const auto pf_rates = pf.rate_vector();
    const auto rr_rates = rr.rate_vector();
    CHECK(*std::min_element(pf_rates.begin(), pf_rates.end()) >=
          *std::min_element(rr_rates.begin(), rr_rates.end()) - 2 * cfg.epsilon_mbps());
  }
}

TEST_CASE("halving epsilon moves rates by at most two steps") {
  std::mt19937_64 rng(5);
  AllocatorConfig coarse;
  coarse.epsilon_kbps = 100.0;
  AllocatorConfig fine = coarse;
  fine.epsilon_kbps = 50.0;
  for (int trial = 0; trial < 60; ++trial) {
    const Topology t = random_instance(rng);
    const auto cliques = cliques_of(t);
    const auto a = progressive_filling(t, cliques, coarse);
    const auto b = progressive_filling(t, cliques, fine);
    for (const auto& f : t.flows) CHECK(std::abs(a.rate(f.id) - b.rate(f.id)) <= 2 * coarse.epsilon_mbps());
  }
}

TEST_CASE("verify_max_min rejects a starved flow") {
  const Topology t = six_node();
  const auto cliques = cliques_of(t);
  auto a = progressive_filling(t, cliques, full_budget());
  a.rates[1] -= 50.0;
  derive_airtimes(a, t);
  const auto verdict = verify_max_min(a, t, cliques, full_budget());
  CHECK_FALSE(verdict.max_min_fair);
  REQUIRE(verdict.witness.has_value());
}

TEST_CASE("config validation and allocator names") {
  AllocatorConfig cfg;
  cfg.epsilon_kbps = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.epsilon_kbps = 10;
  cfg.tau = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK(parse_allocator_kind("roundrobin") == AllocatorKind::round_robin);
  CHECK(parse_allocator_kind("maxthroughput") == AllocatorKind::max_throughput);
  CHECK(to_string(parse_allocator_kind("wihaul")) == "wihaul");
  CHECK_THROWS(parse_allocator_kind("fifo"));
}

TEST_CASE("max-throughput vector is not max-min fair") {
  const Topology t = six_node();
  const auto cliques = cliques_of(t);
  const auto a = max_throughput_allocation(t, cliques, full_budget());
  const auto verdict = verify_max_min(a, t, cliques, full_budget());
  CHECK_FALSE(verdict.max_min_fair);
  REQUIRE(verdict.witness.has_value());
  CHECK(a.rate(*verdict.witness) == doctest::Approx(0.0));
}

TEST_CASE("scaling capacities and demands scales the rates") {
  std::mt19937_64 rng(31);
  const AllocatorConfig cfg;
  for (int trial = 0; trial < 50; ++trial) {
    const Topology t = random_instance(rng);
    Topology scaled = t;
    const double lambda = 0.5 + static_cast<double>(trial % 7);
    for (auto& l : scaled.links) l.capacity_mbps *= lambda;
    for (auto& f : scaled.flows) f.demand_mbps *= lambda;
    const auto a = progressive_filling(t, cliques_of(t), cfg);
    const auto b = progressive_filling(scaled, cliques_of(scaled), cfg);
    for (const auto& f : t.flows) CHECK(std::abs(b.rate(f.id) - lambda * a.rate(f.id)) <= 2 * cfg.epsilon_mbps());
  }
}
