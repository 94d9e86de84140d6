#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "mmfair/conflict.hpp"
#include "support/fixtures.hpp"

using namespace mmfair;
using mmfair::testing::make_flow;

namespace {

bool is_clique(const ConflictGraph& g, const std::vector<std::size_t>& members) {
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      if (!g.adjacent(members[a], members[b])) return false;
    }
  }
  return true;
}

std::vector<std::size_t> indices(const ConflictGraph& g, const Clique& c) {
  std::vector<std::size_t> out;
  for (const auto& s : c.segments) out.push_back(g.index_of(s));
  return out;
}

}  // namespace

TEST_CASE("six-node conflict graph has one clique per relay") {
  const Topology t = mmfair::testing::six_node();
  const ConflictGraph g = build_conflict_graph(t);
  CHECK(g.vertex_count() == 8);
  const CliqueSet cliques = enumerate_cliques(g);
  REQUIRE(cliques.size() == 2);
  std::vector<std::size_t> sizes;
  for (const auto& c : cliques) sizes.push_back(c.segments.size());
  std::sort(sizes.begin(), sizes.end());
  // relay 3 (4 segments) and relay 4 (6); the gateway's three segments all touch node 4
  CHECK(sizes == std::vector<std::size_t>{4, 6});
  CHECK(conflict_nodes(t) == std::set<NodeId>{3, 4});
}

TEST_CASE("self loops and repeated edges are ignored") {
  ConflictGraph g({{1, {0, 1}}, {2, {0, 1}}});
  g.add_edge(0, 0);
  CHECK(g.edge_count() == 0);
  g.add_edge(0, 1);
  g.add_edge(1, 0);
  CHECK(g.edge_count() == 1);
}

TEST_CASE("declared interference adds edges only when enabled") {
  Topology t = mmfair::testing::six_node();
  const FlowSegment a{1, {3, 1}};
  const FlowSegment b{3, {4, 5}};
  t.interference_pairs.push_back({a, b});
  t.interference_pairs.push_back({{99, {3, 1}}, b});
  const ConflictGraph with = build_conflict_graph(t);
  CHECK(with.adjacent(with.index_of(a), with.index_of(b)));
  ConflictOptions off;
  off.include_interference = false;
  const ConflictGraph without = build_conflict_graph(t, off);
  CHECK_FALSE(without.adjacent(without.index_of(a), without.index_of(b)));
  CHECK(without.index_of({99, {3, 1}}) == without.vertex_count());
}

TEST_CASE("cliques are maximal and cover every edge") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 14;
    std::vector<FlowSegment> vs;
    for (std::size_t i = 0; i < n; ++i) vs.push_back({static_cast<FlowId>(i), {0, 1}});
    ConflictGraph g(vs);
    std::bernoulli_distribution coin(0.1 + 0.08 * static_cast<double>(trial % 10));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (coin(rng)) g.add_edge(a, b);
      }
    }
    const CliqueSet cliques = enumerate_cliques(g);
    std::set<std::vector<FlowSegment>> seen;
    for (const auto& c : cliques) {
      const auto members = indices(g, c);
      REQUIRE(is_clique(g, members));
      CHECK(seen.insert(c.segments).second);
      for (std::size_t v = 0; v < n; ++v) {
        if (std::find(members.begin(), members.end(), v) != members.end()) continue;
        auto grown = members;
        grown.push_back(v);
        CHECK_FALSE(is_clique(g, grown));
      }
    }
    for (const auto& [a, b] : g.edges()) {
      const bool covered = std::any_of(cliques.begin(), cliques.end(), [&](const Clique& c) {
        return c.contains(g.vertices()[a]) && c.contains(g.vertices()[b]);
      });
      CHECK(covered);
    }
    for (std::size_t v = 0; v < n; ++v) {
      const bool covered = std::any_of(cliques.begin(), cliques.end(),
                                       [&](const Clique& c) { return c.contains(g.vertices()[v]); });
      CHECK(covered);
    }
    for (std::size_t i = 0; i < cliques.size(); ++i) CHECK(cliques[i].id == i);
  }
}

TEST_CASE("size guard") {
  std::vector<FlowSegment> vs;
  for (int i = 0; i < 10; ++i) vs.push_back({i, {0, 1}});
  ConflictGraph g(vs);
  CliqueLimits limits;
  limits.max_vertices = 5;
  CHECK_THROWS_AS(enumerate_cliques(g, limits), InstanceTooLarge);
}

TEST_CASE("a flow not relayed anywhere creates no conflict node") {
  Topology t;
  t.nodes = {{0, {}, true}, {1, {}, false}, {2, {}, false}};
  t.links = {{0, 1, 100, 0, false}, {0, 2, 100, 0, false}};
  t.flows = {make_flow(1, {0, 1}, 10), make_flow(2, {0, 2}, 10)};
  CHECK(conflict_nodes(t).empty());
  const CliqueSet c = enumerate_cliques(build_conflict_graph(t));
  REQUIRE(c.size() == 1);
  CHECK(c[0].segments.size() == 2);
}

TEST_CASE("dump lists vertices, edges and cliques") {
  const Topology t = mmfair::testing::six_node();
  const ConflictGraph g = build_conflict_graph(t);
  std::ostringstream out;
  write_conflict_dump(out, g, enumerate_cliques(g));
  std::istringstream in(out.str());
  std::string line;
  int v = 0, e = 0, c = 0;
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) == 0) ++v;
    if (line.rfind("e ", 0) == 0) ++e;
    if (line.rfind("c ", 0) == 0) ++c;
  }
  CHECK(v == 8);
  CHECK(e == static_cast<int>(g.edge_count()));
  CHECK(c == 2);
}
