#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "mmfair/model.hpp"

namespace mmfair::testing {

struct InstanceShape {
  int max_nodes = 6;
  int max_flows = 5;
  double min_capacity = 100.0;
  double max_capacity = 7000.0;
  // Probability that a flow is backlogged rather than demand-limited.
  double backlogged_share = 0.3;
  double min_demand = 20.0;
  double max_demand = 3000.0;
};

/// Random tree backhaul: node 0 is the gateway, every other node hangs off a
/// random earlier node. Flows run between the gateway and distinct nodes, in
/// either direction. No interference pairs.
inline Topology random_instance(std::mt19937_64& rng, const InstanceShape& shape = {}) {
  std::uniform_int_distribution<int> node_count(2, shape.max_nodes);
  std::uniform_real_distribution<double> cap(shape.min_capacity, shape.max_capacity);
  std::uniform_real_distribution<double> demand(shape.min_demand, shape.max_demand);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Topology t;
  const int n = node_count(rng);
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) t.nodes.push_back({i, {10.0 * i, 0.0}, i == 0});
  for (int i = 1; i < n; ++i) {
    parent[static_cast<std::size_t>(i)] = std::uniform_int_distribution<int>(0, i - 1)(rng);
    const double c = std::round(cap(rng));
    t.links.push_back({parent[static_cast<std::size_t>(i)], i, c, 0.0, false});
    t.links.push_back({i, parent[static_cast<std::size_t>(i)], c, 0.0, false});
  }

  std::vector<int> sinks;
  for (int i = 1; i < n; ++i) sinks.push_back(i);
  std::shuffle(sinks.begin(), sinks.end(), rng);
  const int flows = std::uniform_int_distribution<int>(1, std::min<int>(shape.max_flows, n - 1))(rng);
  for (int k = 0; k < flows; ++k) {
    std::vector<NodeId> nodes;
    for (int v = sinks[static_cast<std::size_t>(k)]; v != -1; v = parent[static_cast<std::size_t>(v)]) {
      nodes.push_back(v);
    }
    Flow f;
    f.id = k + 1;
    f.direction = unit(rng) < 0.5 ? Direction::downlink : Direction::uplink;
    if (f.direction == Direction::downlink) std::reverse(nodes.begin(), nodes.end());
    f.path = path_from_nodes(nodes);
    f.demand_mbps = unit(rng) < shape.backlogged_share ? std::numeric_limits<double>::infinity()
                                                       : std::round(demand(rng));
    t.flows.push_back(f);
  }
  return t;
}

}  // namespace mmfair::testing
