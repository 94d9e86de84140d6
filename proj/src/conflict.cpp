#include "mmfair/conflict.hpp"

#include <algorithm>
#include <ostream>

namespace mmfair {

ConflictGraph::ConflictGraph(std::vector<FlowSegment> vertices) : vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
  adjacency_.assign(vertices_.size(), std::vector<char>(vertices_.size(), 0));
  neighbours_.resize(vertices_.size());
}

void ConflictGraph::add_edge(std::size_t a, std::size_t b) {
  if (a == b || a >= vertices_.size() || b >= vertices_.size()) return;
  if (adjacency_[a][b]) return;
  adjacency_[a][b] = adjacency_[b][a] = 1;
  neighbours_[a].push_back(b);
  neighbours_[b].push_back(a);
  edges_.insert(std::minmax(a, b));
}

std::vector<std::pair<std::size_t, std::size_t>> ConflictGraph::edges() const {
  return {edges_.begin(), edges_.end()};
}

std::size_t ConflictGraph::index_of(const FlowSegment& segment) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), segment);
  if (it == vertices_.end() || *it != segment) return vertices_.size();
  return static_cast<std::size_t>(it - vertices_.begin());
}

ConflictGraph build_conflict_graph(const Topology& topology, const ConflictOptions& options) {
  ConflictGraph graph(topology.segments());
  const auto& v = graph.vertices();
  for (std::size_t a = 0; a < v.size(); ++a) {
    for (std::size_t b = a + 1; b < v.size(); ++b) {
      const LinkKey la = v[a].link;
      const LinkKey lb = v[b].link;
      if (la.src == lb.src || la.src == lb.dst || la.dst == lb.src || la.dst == lb.dst) {
        graph.add_edge(a, b);
      }
    }
  }
  if (options.include_interference) {
    for (const auto& pair : topology.interference_pairs) {
      const std::size_t a = graph.index_of(pair.a);
      const std::size_t b = graph.index_of(pair.b);
      if (a < graph.vertex_count() && b < graph.vertex_count() && a != b) graph.add_edge(a, b);
    }
  }
  return graph;
}

bool Clique::contains(const FlowSegment& segment) const {
  return std::binary_search(segments.begin(), segments.end(), segment);
}

namespace {

using VertexSet = std::vector<std::size_t>;

struct BronKerbosch {
  const ConflictGraph& graph;
  std::vector<VertexSet> found;

  void run(VertexSet& r, VertexSet p, VertexSet x) {
    if (p.empty() && x.empty()) {
      found.push_back(r);
      return;
    }
    // Pivot on the vertex of P u X with the most neighbours in P.
    std::size_t pivot = p.empty() ? x.front() : p.front();
    std::size_t best = 0;
    for (const VertexSet* set : {&p, &x}) {
      for (std::size_t u : *set) {
        std::size_t count = 0;
        for (std::size_t w : p) count += graph.adjacent(u, w) ? 1 : 0;
        if (count > best) {
          best = count;
          pivot = u;
        }
      }
    }
    VertexSet candidates;
    for (std::size_t v : p) {
      if (!graph.adjacent(pivot, v)) candidates.push_back(v);
    }
    for (std::size_t v : candidates) {
      VertexSet next_p;
      VertexSet next_x;
      for (std::size_t w : p) {
        if (graph.adjacent(v, w)) next_p.push_back(w);
      }
      for (std::size_t w : x) {
        if (graph.adjacent(v, w)) next_x.push_back(w);
      }
      r.push_back(v);
      run(r, std::move(next_p), std::move(next_x));
      r.pop_back();
      p.erase(std::find(p.begin(), p.end(), v));
      x.push_back(v);
    }
  }
};

}  // namespace

CliqueSet enumerate_cliques(const ConflictGraph& graph, const CliqueLimits& limits) {
  if (graph.vertex_count() > limits.max_vertices || graph.edge_count() > limits.max_edges) {
    throw InstanceTooLarge("instance too large: " + std::to_string(graph.vertex_count()) +
                           " segments, " + std::to_string(graph.edge_count()) + " conflicts");
  }
  BronKerbosch search{graph, {}};
  VertexSet r;
  VertexSet p(graph.vertex_count());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = i;
  if (!p.empty()) search.run(r, p, {});

  // Vertices are sorted, so sorting index lists sorts member segments too.
  for (auto& members : search.found) std::sort(members.begin(), members.end());
  std::sort(search.found.begin(), search.found.end());

  CliqueSet out;
  out.reserve(search.found.size());
  for (const auto& members : search.found) {
    Clique clique;
    clique.id = out.size();
    for (std::size_t v : members) clique.segments.push_back(graph.vertices()[v]);
    out.push_back(std::move(clique));
  }
  return out;
}

std::set<NodeId> conflict_nodes(const Topology& topology) {
  std::set<NodeId> out;
  for (const auto& flow : topology.flows) {
    for (std::size_t i = 1; i < flow.path.size(); ++i) {
      if (flow.path[i - 1].dst == flow.path[i].src) out.insert(flow.path[i].src);
    }
  }
  return out;
}

void write_conflict_dump(std::ostream& out, const ConflictGraph& graph, const CliqueSet& cliques) {
  out << "# conflict graph: " << graph.vertex_count() << " segments, " << graph.edge_count()
      << " edges, " << cliques.size() << " cliques\n";
  for (const auto& v : graph.vertices()) out << "v " << to_string(v) << '\n';
  for (const auto& [a, b] : graph.edges()) {
    out << "e " << to_string(graph.vertices()[a]) << ' ' << to_string(graph.vertices()[b]) << '\n';
  }
  for (const auto& clique : cliques) {
    out << "c " << clique.id;
    for (const auto& s : clique.segments) out << ' ' << to_string(s);
    out << '\n';
  }
}

}  // namespace mmfair
