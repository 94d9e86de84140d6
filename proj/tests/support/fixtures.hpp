#pragma once

#include <filesystem>
#include <string>

#include "mmfair/allocator.hpp"
#include "mmfair/conflict.hpp"
#include "mmfair/topology_io.hpp"

namespace mmfair::testing {

inline std::filesystem::path data_path(const std::string& relative) {
  return std::filesystem::path(MMFAIR_DATA_DIR) / relative;
}

inline Topology six_node() { return load_topology(data_path("topologies/six_node_backhaul.json")); }
inline Topology lamppost() { return load_topology(data_path("topologies/lamppost16.json")); }

inline CliqueSet cliques_of(const Topology& t, bool interference = true) {
  ConflictOptions o;
  o.include_interference = interference;
  return enumerate_cliques(build_conflict_graph(t, o));
}

/// No beam-training reserve: each clique may use the whole data interval.
inline AllocatorConfig full_budget() {
  AllocatorConfig c;
  c.tau = 0.0;
  return c;
}

inline Flow make_flow(FlowId id, std::vector<NodeId> nodes, double demand) {
  Flow f;
  f.id = id;
  f.path = path_from_nodes(nodes);
  f.demand_mbps = demand;
  return f;
}

}  // namespace mmfair::testing
