#include "mmfair/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <sstream>

namespace mmfair {

Hierarchy::Hierarchy(NodeId root, std::vector<ScheduleNode> nodes) : root_(root), nodes_(std::move(nodes)) {
  std::sort(nodes_.begin(), nodes_.end(), [](const ScheduleNode& a, const ScheduleNode& b) {
    return std::tie(a.level, a.id) < std::tie(b.level, b.id);
  });
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_[nodes_[i].id] = i;
}

const ScheduleNode& Hierarchy::at(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::out_of_range("node " + std::to_string(id) + " not in hierarchy");
  return nodes_[it->second];
}

bool Hierarchy::contains(NodeId id) const { return index_.contains(id); }

int Hierarchy::depth() const { return nodes_.empty() ? 0 : nodes_.back().level; }

namespace {

std::map<NodeId, std::set<NodeId>> neighbourhood(const Topology& topology) {
  std::map<NodeId, std::set<NodeId>> adj;
  for (const auto& link : topology.links) {
    adj[link.src].insert(link.dst);
    adj[link.dst].insert(link.src);
  }
  return adj;
}

}  // namespace

std::map<NodeId, int> hop_distances(const Topology& topology) {
  const auto adj = neighbourhood(topology);
  std::map<NodeId, int> hops;
  std::deque<NodeId> queue;
  for (const auto& node : topology.nodes) {
    if (node.is_gateway) {
      hops[node.id] = 0;
      queue.push_back(node.id);
    }
  }
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    auto it = adj.find(u);
    if (it == adj.end()) continue;
    for (NodeId v : it->second) {
      if (!hops.contains(v)) {
        hops[v] = hops[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return hops;
}

Hierarchy build_hierarchy(const Topology& topology, const std::set<NodeId>& conflict) {
  const auto hops = hop_distances(topology);
  const auto adj = neighbourhood(topology);
  for (const auto& flow : topology.flows) {
    for (NodeId n : nodes_on_path(flow.path)) {
      if (!hops.contains(n)) {
        throw SchedulingError("node " + std::to_string(n) + " has no route to a gateway");
      }
    }
  }

  std::map<NodeId, ScheduleNode> placed;
  NodeId root = 0;
  bool have_root = false;
  for (NodeId c : conflict) {
    if (!hops.contains(c)) continue;
    if (!have_root || hops.at(c) < hops.at(root)) {
      root = c;
      have_root = true;
    }
  }

  if (!have_root) {
    for (const auto& node : topology.nodes) {
      if (node.is_gateway && (!have_root || node.id < root)) {
        root = node.id;
        have_root = true;
      }
    }
    if (!have_root) throw SchedulingError("topology has no gateway to root the hierarchy");
    placed[root] = {root, hops.at(root), false, 0, std::nullopt};
  } else {
    const int root_hops = hops.at(root);
    placed[root] = {root, root_hops, true, 0, std::nullopt};
    for (NodeId c : conflict) {
      if (c == root || !hops.contains(c)) continue;
      int level = std::abs(hops.at(c) - root_hops);
      if (level == 0) level = 1;  // same distance as the root: directly below it
      placed[c] = {c, hops.at(c), true, level, std::nullopt};
    }
    for (auto& [id, node] : placed) {
      if (id == root) continue;
      std::optional<NodeId> best;
      for (NodeId nb : adj.count(id) ? adj.at(id) : std::set<NodeId>{}) {
        auto it = placed.find(nb);
        if (it == placed.end() || it->second.level >= node.level) continue;
        if (!best || it->second.level > placed.at(*best).level) best = nb;
      }
      node.parent = best ? best : std::optional<NodeId>(root);
    }
  }

  // Remaining nodes join in waves below an already placed neighbour,
  // preferring conflict nodes, then the lowest level, then the smallest id.
  for (bool progress = true; progress;) {
    progress = false;
    std::vector<ScheduleNode> wave;
    for (const auto& [id, h] : hops) {
      if (placed.contains(id)) continue;
      std::optional<NodeId> best;
      auto rank = [&](NodeId n) {
        const auto& p = placed.at(n);
        return std::make_tuple(p.conflict ? 0 : 1, p.level, p.id);
      };
      for (NodeId nb : adj.count(id) ? adj.at(id) : std::set<NodeId>{}) {
        if (!placed.contains(nb)) continue;
        if (!best || rank(nb) < rank(*best)) best = nb;
      }
      if (best) wave.push_back({id, h, conflict.contains(id), placed.at(*best).level + 1, best});
    }
    for (auto& node : wave) {
      placed[node.id] = node;
      progress = true;
    }
  }

  std::vector<ScheduleNode> nodes;
  for (auto& [_, node] : placed) nodes.push_back(node);
  return Hierarchy(root, std::move(nodes));
}

void FrameConfig::validate() const {
  if (superframe_us <= 0 || overhead_us < 0 || overhead_us >= superframe_us) {
    throw std::invalid_argument("overhead must be shorter than the superframe");
  }
  if (service_periods < 1) throw std::invalid_argument("need at least one service period");
}

std::int64_t Schedule::scheduled_us(const FlowSegment& segment) const {
  std::int64_t sum = 0;
  for (const auto& slot : slots) {
    if (slot.segment == segment) sum += slot.duration_us;
  }
  return sum;
}

std::int64_t Schedule::makespan_us() const {
  if (slots.empty()) return 0;
  std::int64_t lo = slots.front().start_us;
  std::int64_t hi = slots.front().end_us();
  for (const auto& slot : slots) {
    lo = std::min(lo, slot.start_us);
    hi = std::max(hi, slot.end_us());
  }
  return hi - lo;
}

std::int64_t Schedule::total_slot_us() const {
  std::int64_t sum = 0;
  for (const auto& slot : slots) sum += slot.duration_us;
  return sum;
}

std::int64_t quantized_airtime_us(double airtime, std::int64_t data_interval_us) {
  return static_cast<std::int64_t>(std::floor(airtime * static_cast<double>(data_interval_us) + 1e-6));
}

namespace {

struct Interval {
  std::int64_t start;
  std::int64_t end;
};

// Segments sharing at least one clique with each segment (itself included).
std::map<FlowSegment, std::set<FlowSegment>> clique_neighbours(const CliqueSet& cliques) {
  std::map<FlowSegment, std::set<FlowSegment>> out;
  for (const auto& clique : cliques) {
    for (const auto& a : clique.segments) {
      out[a].insert(clique.segments.begin(), clique.segments.end());
    }
  }
  return out;
}

std::vector<Interval> merged(std::vector<Interval> busy) {
  std::sort(busy.begin(), busy.end(), [](const Interval& a, const Interval& b) { return a.start < b.start; });
  std::vector<Interval> out;
  for (const auto& iv : busy) {
    if (!out.empty() && iv.start <= out.back().end) {
      out.back().end = std::max(out.back().end, iv.end);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

std::vector<Interval> free_gaps(const std::vector<Interval>& busy, std::int64_t from, std::int64_t to) {
  std::vector<Interval> gaps;
  std::int64_t cursor = from;
  for (const auto& iv : busy) {
    if (iv.end <= cursor) continue;
    if (iv.start >= to) break;
    if (iv.start > cursor) gaps.push_back({cursor, iv.start});
    cursor = std::max(cursor, iv.end);
  }
  if (cursor < to) gaps.push_back({cursor, to});
  return gaps;
}

}  // namespace

Schedule assign_slots(const Hierarchy& hierarchy, const CliqueSet& cliques,
                      const AllocationVector& alloc, const FrameConfig& frame) {
  frame.validate();
  const std::int64_t data = frame.data_interval_us();
  const int periods = frame.service_periods;

  struct Item {
    FlowSegment segment;
    std::int64_t total;
    std::tuple<int, NodeId, NodeId, FlowId> order;
  };
  std::vector<Item> items;
  for (const auto& [segment, airtime] : alloc.airtimes) {
    const std::int64_t total = quantized_airtime_us(airtime, data);
    if (total <= 0) continue;
    const NodeId a = segment.link.src;
    const NodeId b = segment.link.dst;
    if (!hierarchy.contains(a) || !hierarchy.contains(b)) {
      throw SchedulingError("segment " + to_string(segment) + " touches a node outside the hierarchy");
    }
    const auto& na = hierarchy.at(a);
    const auto& nb = hierarchy.at(b);
    const bool a_first = std::tie(na.level, na.id) < std::tie(nb.level, nb.id);
    const auto& owner = a_first ? na : nb;
    const auto& other = a_first ? nb : na;
    items.push_back({segment, total, {owner.level, owner.id, other.id, segment.flow}});
  }
  std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
    return std::tie(x.order, x.segment) < std::tie(y.order, y.segment);
  });

  const auto neighbours = clique_neighbours(cliques);
  std::map<FlowSegment, std::vector<Interval>> taken;

  Schedule schedule;
  schedule.superframe_us = frame.superframe_us;
  schedule.overhead_us = frame.overhead_us;

  for (int m = 0; m < periods; ++m) {
    const std::int64_t release = data * m / periods;
    const std::int64_t window_end = data * (m + 1) / periods;
    for (const auto& item : items) {
      std::int64_t need = item.total * (m + 1) / periods - item.total * m / periods;
      if (need == 0) continue;

      // Time already used by anything that shares a clique is off limits.
      std::vector<Interval> busy = taken[item.segment];
      if (auto it = neighbours.find(item.segment); it != neighbours.end()) {
        for (const auto& other : it->second) {
          if (other == item.segment) continue;
          auto t = taken.find(other);
          if (t != taken.end()) busy.insert(busy.end(), t->second.begin(), t->second.end());
        }
      }
      busy = merged(std::move(busy));

      std::vector<Interval> pieces;
      for (const auto& gap : free_gaps(busy, release, window_end)) {
        if (gap.end - gap.start >= need) {
          pieces.push_back({gap.start, gap.start + need});
          need = 0;
          break;
        }
      }
      // Spill over: later free time first, then gaps left by earlier rounds.
      for (auto [from, to] : {std::pair{release, data}, std::pair{std::int64_t{0}, release}}) {
        for (const auto& gap : free_gaps(busy, from, to)) {
          if (need == 0) break;
          const std::int64_t take = std::min(need, gap.end - gap.start);
          pieces.push_back({gap.start, gap.start + take});
          need -= take;
        }
      }
      if (need > 0) {
        std::size_t worst = 0;
        double worst_load = -1.0;
        for (const auto& clique : cliques) {
          if (!clique.contains(item.segment)) continue;
          const double load = alloc.clique_airtime(clique);
          if (load > worst_load) {
            worst_load = load;
            worst = clique.id;
          }
        }
        std::ostringstream os;
        os << "airtime infeasible within the data interval: clique " << worst << " overflows while placing "
           << to_string(item.segment);
        throw SchedulingError(os.str());
      }
      auto& mine = taken[item.segment];
      for (const auto& piece : pieces) {
        schedule.slots.push_back({item.segment, piece.start, piece.end - piece.start});
        mine.push_back(piece);
      }
    }
  }

  std::sort(schedule.slots.begin(), schedule.slots.end(), [](const Slot& a, const Slot& b) {
    return std::tie(a.start_us, a.segment) < std::tie(b.start_us, b.segment);
  });
  return schedule;
}

std::vector<ScheduleViolation> check_schedule(const Schedule& schedule, const CliqueSet& cliques,
                                              const AllocationVector& alloc) {
  std::vector<ScheduleViolation> out;
  const std::int64_t data = schedule.data_interval_us();
  const auto neighbours = clique_neighbours(cliques);

  for (const auto& slot : schedule.slots) {
    if (slot.start_us < 0 || slot.duration_us <= 0 || slot.end_us() > data) {
      std::ostringstream os;
      os << to_string(slot.segment) << " slot [" << slot.start_us << ", " << slot.end_us()
         << ") lies outside the data interval";
      out.push_back({ScheduleViolationKind::out_of_bounds, os.str()});
    }
  }

  auto conflicting = [&](const FlowSegment& a, const FlowSegment& b) {
    if (a == b) return true;
    auto it = neighbours.find(a);
    return it != neighbours.end() && it->second.contains(b);
  };
  const auto& slots = schedule.slots;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    for (std::size_t j = i + 1; j < slots.size(); ++j) {
      const Slot& a = slots[i];
      const Slot& b = slots[j];
      if (a.start_us < b.end_us() && b.start_us < a.end_us() && conflicting(a.segment, b.segment)) {
        std::ostringstream os;
        os << to_string(a.segment) << " [" << a.start_us << ", " << a.end_us() << ") overlaps "
           << to_string(b.segment) << " [" << b.start_us << ", " << b.end_us() << ")";
        out.push_back({ScheduleViolationKind::overlap, os.str()});
      }
    }
  }

  std::map<FlowSegment, std::int64_t> granted;
  for (const auto& slot : slots) granted[slot.segment] += slot.duration_us;
  constexpr double slack_us = 1.0;
  for (const auto& [segment, airtime] : alloc.airtimes) {
    const double owed = airtime * static_cast<double>(data);
    const auto it = granted.find(segment);
    const double got = it == granted.end() ? 0.0 : static_cast<double>(it->second);
    if (got < owed - slack_us) {
      std::ostringstream os;
      os << to_string(segment) << " granted " << got << " us of " << owed << " us";
      out.push_back({ScheduleViolationKind::deficit, os.str()});
    } else if (got > owed + slack_us) {
      std::ostringstream os;
      os << to_string(segment) << " granted " << got << " us, more than " << owed << " us";
      out.push_back({ScheduleViolationKind::excess, os.str()});
    }
  }
  for (const auto& [segment, got] : granted) {
    if (!alloc.airtimes.contains(segment)) {
      out.push_back({ScheduleViolationKind::excess, to_string(segment) + " has slots but no allocation"});
    }
  }
  return out;
}

}  // namespace mmfair
