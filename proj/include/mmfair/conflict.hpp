#pragma once

#include <cstddef>
#include <iosfwd>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mmfair/model.hpp"

namespace mmfair {

/// Segments as vertices; an edge joins two segments that cannot be active at
/// the same time.
class ConflictGraph {
 public:
  ConflictGraph() = default;
  explicit ConflictGraph(std::vector<FlowSegment> vertices);

  void add_edge(std::size_t a, std::size_t b);
  bool adjacent(std::size_t a, std::size_t b) const { return adjacency_[a][b] != 0; }

  const std::vector<FlowSegment>& vertices() const { return vertices_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  /// Edges as (smaller index, larger index), sorted.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  const std::vector<std::size_t>& neighbours(std::size_t v) const { return neighbours_[v]; }

  /// Index of `segment`, or vertex_count() if absent.
  std::size_t index_of(const FlowSegment& segment) const;

 private:
  std::vector<FlowSegment> vertices_;
  std::vector<std::vector<char>> adjacency_;
  std::vector<std::vector<std::size_t>> neighbours_;
  std::set<std::pair<std::size_t, std::size_t>> edges_;
};

struct ConflictOptions {
  // When false, declared secondary-interference pairs are left out of the
  // graph (control runs that schedule as if the beams never interfered).
  bool include_interference = true;
};

ConflictGraph build_conflict_graph(const Topology& topology, const ConflictOptions& options = {});

struct Clique {
  std::size_t id = 0;
  // Sorted by (k, i, j).
  std::vector<FlowSegment> segments;

  bool contains(const FlowSegment& segment) const;
};

using CliqueSet = std::vector<Clique>;

struct CliqueLimits {
  std::size_t max_vertices = 512;
  std::size_t max_edges = 65536;
};

class InstanceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All maximal cliques (Bron-Kerbosch with pivoting). Ids follow the
/// lexicographic order of the sorted member lists.
CliqueSet enumerate_cliques(const ConflictGraph& graph, const CliqueLimits& limits = {});

/// Nodes that forward traffic for some flow (two consecutive path links
/// through the node).
std::set<NodeId> conflict_nodes(const Topology& topology);

/// Line-oriented dump: one `v`, `e` or `c` record per line.
void write_conflict_dump(std::ostream& out, const ConflictGraph& graph, const CliqueSet& cliques);

}  // namespace mmfair
