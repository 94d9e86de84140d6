#include "mmfair/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "mmfair/topology_io.hpp"

namespace mmfair {

using nlohmann::json;

namespace {

std::string link_name(LinkKey key) {
  return std::to_string(key.src) + "->" + std::to_string(key.dst);
}

std::string demand_text(double mbps) {
  if (std::isinf(mbps)) return "backlogged";
  std::ostringstream os;
  os << mbps << " Mbps";
  return os.str();
}

}  // namespace

std::string describe(const Event& event) {
  std::ostringstream os;
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, SetDemand>) {
          os << "set_demand flow " << e.flow << " to " << demand_text(e.demand_mbps);
        } else if constexpr (std::is_same_v<T, SetAttenuation>) {
          os << "set_attenuation " << link_name(e.link) << " to " << e.attenuation_db << " dB";
        } else if constexpr (std::is_same_v<T, SetCapacity>) {
          os << "set_capacity " << link_name(e.link) << " to " << e.capacity_mbps << " Mbps";
        } else {
          os << "reroute flow " << e.flow << " via";
          for (NodeId n : e.path) os << ' ' << n;
        }
      },
      event);
  return os.str();
}

void apply_event(Topology& topology, const Event& event) {
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, SetDemand>) {
          Flow* flow = topology.find_flow(e.flow);
          if (flow == nullptr) throw std::invalid_argument("unknown flow " + std::to_string(e.flow));
          if (!(e.demand_mbps >= 0.0)) throw std::invalid_argument("demand must be non-negative");
          flow->demand_mbps = e.demand_mbps;
        } else if constexpr (std::is_same_v<T, SetAttenuation>) {
          if (topology.find_link(e.link) == nullptr) {
            throw std::invalid_argument("unknown link " + link_name(e.link));
          }
          if (!(e.attenuation_db >= 0.0)) throw std::invalid_argument("attenuation must be non-negative");
          topology.set_attenuation(e.link, e.attenuation_db);
        } else if constexpr (std::is_same_v<T, SetCapacity>) {
          if (topology.find_link(e.link) == nullptr) {
            throw std::invalid_argument("unknown link " + link_name(e.link));
          }
          if (!(e.capacity_mbps >= 0.0) || std::isinf(e.capacity_mbps)) {
            throw std::invalid_argument("capacity must be finite and non-negative");
          }
          topology.set_capacity(e.link, e.capacity_mbps);
        } else {
          Flow* flow = topology.find_flow(e.flow);
          if (flow == nullptr) throw std::invalid_argument("unknown flow " + std::to_string(e.flow));
          if (e.path.size() < 2) throw std::invalid_argument("reroute path needs at least two nodes");
          Flow candidate = *flow;
          candidate.path = path_from_nodes(e.path);
          const auto violations = validate_path(topology, candidate);
          if (!violations.empty()) throw std::invalid_argument(violations.front().message);
          flow->path = candidate.path;
          // Pairs naming abandoned segments of this flow no longer apply.
          const auto& path = flow->path;
          auto stale = [&](const FlowSegment& s) {
            return s.flow == e.flow && std::find(path.begin(), path.end(), s.link) == path.end();
          };
          std::erase_if(topology.interference_pairs,
                        [&](const SegmentPair& p) { return stale(p.a) || stale(p.b); });
        }
      },
      event);
}

Scenario parse_scenario(const json& doc, const Topology& topology) {
  if (!doc.is_object()) throw LoadError("scenario: expected an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "duration_bi" && key != "events") throw LoadError("scenario: unknown field '" + key + "'");
  }
  Scenario scenario;
  if (!doc.contains("duration_bi") || !doc.at("duration_bi").is_number_integer()) {
    throw LoadError("scenario: duration_bi must be an integer");
  }
  scenario.duration_bi = doc.at("duration_bi").get<int>();
  if (scenario.duration_bi < 1) throw LoadError("scenario: duration_bi must be at least 1");

  const json events = doc.contains("events") ? doc.at("events") : json::array();
  if (!events.is_array()) throw LoadError("scenario: events must be an array");
  for (std::size_t i = 0; i < events.size(); ++i) {
    const json& e = events[i];
    const std::string where = "events[" + std::to_string(i) + "]";
    if (!e.is_object()) throw LoadError(where + ": expected an object");
    auto get = [&](const char* key) -> const json& {
      if (!e.contains(key)) throw LoadError(where + ": missing field '" + key + "'");
      return e.at(key);
    };
    auto number = [&](const char* key) {
      const json& v = get(key);
      if (!v.is_number()) throw LoadError(where + ": field '" + key + "' must be a number");
      return v.get<double>();
    };
    auto integer = [&](const char* key) {
      const json& v = get(key);
      if (!v.is_number_integer()) throw LoadError(where + ": field '" + key + "' must be an integer");
      return v.get<int>();
    };
    auto only = [&](std::initializer_list<const char*> allowed) {
      for (const auto& [key, _] : e.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
          throw LoadError(where + ": unknown field '" + key + "'");
        }
      }
    };

    ScenarioEvent se;
    se.bi = integer("bi");
    if (se.bi < 0 || se.bi >= scenario.duration_bi) {
      throw LoadError(where + ": bi " + std::to_string(se.bi) + " outside [0, " +
                      std::to_string(scenario.duration_bi) + ")");
    }
    const json& type = get("type");
    if (!type.is_string()) throw LoadError(where + ": type must be a string");
    const std::string kind = type.get<std::string>();
    if (kind == "set_demand") {
      only({"bi", "type", "flow", "demand_mbps"});
      const json& d = get("demand_mbps");
      double demand = 0.0;
      if (d.is_string() && d.get<std::string>() == "backlogged") {
        demand = std::numeric_limits<double>::infinity();
      } else if (d.is_number()) {
        demand = d.get<double>();
      } else {
        throw LoadError(where + ": demand_mbps must be a number or \"backlogged\"");
      }
      se.event = SetDemand{integer("flow"), demand};
    } else if (kind == "set_attenuation") {
      only({"bi", "type", "src", "dst", "attenuation_db"});
      se.event = SetAttenuation{{integer("src"), integer("dst")}, number("attenuation_db")};
    } else if (kind == "set_capacity") {
      only({"bi", "type", "src", "dst", "capacity_mbps"});
      se.event = SetCapacity{{integer("src"), integer("dst")}, number("capacity_mbps")};
    } else if (kind == "reroute") {
      only({"bi", "type", "flow", "path"});
      const json& p = get("path");
      if (!p.is_array()) throw LoadError(where + ": path must be a list of node ids");
      Reroute r{integer("flow"), {}};
      for (const auto& n : p) {
        if (!n.is_number_integer()) throw LoadError(where + ": path must be a list of node ids");
        r.path.push_back(n.get<NodeId>());
      }
      se.event = r;
    } else {
      throw LoadError(where + ": unknown event type '" + kind + "'");
    }
    scenario.events.push_back(std::move(se));
  }
  std::stable_sort(scenario.events.begin(), scenario.events.end(),
                   [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.bi < b.bi; });

  // Replay against a scratch copy so that references are checked in the
  // state they will meet at run time (e.g. a link used after a reroute).
  Topology scratch = topology;
  for (const auto& se : scenario.events) {
    try {
      apply_event(scratch, se.event);
    } catch (const std::invalid_argument& e) {
      throw LoadError("scenario event at bi " + std::to_string(se.bi) + " (" + describe(se.event) +
                      "): " + e.what());
    }
  }
  return scenario;
}

Scenario load_scenario(const std::filesystem::path& file, const Topology& topology) {
  const json doc = read_json_file(file);
  try {
    return parse_scenario(doc, topology);
  } catch (const LoadError& e) {
    throw LoadError(file.string() + ": " + e.what());
  }
}

json scenario_to_json(const Scenario& scenario) {
  json doc;
  doc["duration_bi"] = scenario.duration_bi;
  doc["events"] = json::array();
  for (const auto& se : scenario.events) {
    json e;
    e["bi"] = se.bi;
    std::visit(
        [&](const auto& ev) {
          using T = std::decay_t<decltype(ev)>;
          if constexpr (std::is_same_v<T, SetDemand>) {
            e["type"] = "set_demand";
            e["flow"] = ev.flow;
            e["demand_mbps"] = std::isinf(ev.demand_mbps) ? json("backlogged") : json(ev.demand_mbps);
          } else if constexpr (std::is_same_v<T, SetAttenuation>) {
            e["type"] = "set_attenuation";
            e["src"] = ev.link.src;
            e["dst"] = ev.link.dst;
            e["attenuation_db"] = ev.attenuation_db;
          } else if constexpr (std::is_same_v<T, SetCapacity>) {
            e["type"] = "set_capacity";
            e["src"] = ev.link.src;
            e["dst"] = ev.link.dst;
            e["capacity_mbps"] = ev.capacity_mbps;
          } else {
            e["type"] = "reroute";
            e["flow"] = ev.flow;
            e["path"] = ev.path;
          }
        },
        se.event);
    doc["events"].push_back(e);
  }
  return doc;
}

void SimConfig::validate() const {
  alloc.validate();
  frame.validate();
  if (packet_bytes <= 0) throw std::invalid_argument("packet size must be positive");
  if (queue_limit_bytes < packet_bytes) throw std::invalid_argument("queue bound below one packet");
}

const FlowReport& BiReport::flow(FlowId id) const {
  for (const auto& f : flows) {
    if (f.flow == id) return f;
  }
  throw std::out_of_range("flow " + std::to_string(id) + " not in report");
}

namespace {

struct Packet {
  FlowId flow = 0;
  double created_us = 0.0;
  int bytes = 0;
};

struct Queue {
  std::deque<Packet> packets;
  std::int64_t bytes = 0;
};

struct Transmitter {
  double active_end = -1.0;
  bool busy = false;
  std::uint64_t epoch = 0;
};

struct FlowState {
  double next_arrival = std::numeric_limits<double>::infinity();
  double phase = 0.0;  // in [0, 1) of the packet interval
  double demand = 0.0;
  std::int64_t generated = 0, delivered = 0, dropped = 0;
  std::int64_t bi_generated = 0, bi_delivered = 0, bi_dropped = 0;
  double bi_delay_sum = 0.0, bi_delay_max = 0.0;
};

enum class Kind { slot_start, tx_done, wake };

struct SimEvent {
  double t = 0.0;
  std::uint64_t seq = 0;
  Kind kind = Kind::slot_start;
  FlowSegment segment;
  double slot_end = 0.0;
  double tx_start = 0.0;
  std::uint64_t epoch = 0;
  Packet packet;

  bool operator>(const SimEvent& o) const { return std::tie(t, seq) > std::tie(o.t, o.seq); }
};

struct Plan {
  AllocationVector alloc;
  Schedule schedule;
  std::vector<CliqueReport> cliques;
  double scale = 1.0;
};

struct TxRecord {
  double start = 0.0;
  double end = 0.0;
};

}  // namespace

struct Simulator::Impl {
  Topology topo;
  SimConfig cfg;
  int bi = 0;
  Plan current, pending;
  std::set<std::pair<LinkKey, LinkKey>> interfering;  // both orders stored
  std::map<LinkKey, std::vector<LinkKey>> interferers;
  std::map<FlowId, FlowState> flows;
  std::map<std::pair<NodeId, FlowId>, Queue> queues;
  std::map<NodeId, std::int64_t> node_bytes;
  std::map<NodeId, std::int64_t> peak_bytes;
  std::map<FlowSegment, Transmitter> tx;
  std::map<LinkKey, std::vector<TxRecord>> records;
  double max_tx_us = 0.0;
  std::int64_t interference_losses = 0;
  std::priority_queue<SimEvent, std::vector<SimEvent>, std::greater<>> heap;
  std::uint64_t seq = 0;

  Impl(Topology t, SimConfig c) : topo(std::move(t)), cfg(std::move(c)) {
    cfg.validate();
    for (const auto& p : topo.interference_pairs) {
      interfering.insert({p.a.link, p.b.link});
      interfering.insert({p.b.link, p.a.link});
    }
    for (const auto& [a, b] : interfering) interferers[a].push_back(b);
    expand_interference();

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& f : topo.flows) {
      FlowState st;
      st.phase = unit(rng);
      st.demand = f.demand_mbps;
      st.next_arrival = first_arrival(st, 0.0);
      flows[f.id] = st;
    }
  }

  double bits() const { return 8.0 * cfg.packet_bytes; }

  double first_arrival(const FlowState& st, double from) const {
    if (!(st.demand > 0.0) || std::isinf(st.demand)) return std::numeric_limits<double>::infinity();
    return from + st.phase * bits() / st.demand;
  }

  // Physical interference is a property of link pairs; every flow crossing
  // an interfering link inherits it.
  void expand_interference() {
    if (interfering.empty()) return;
    const auto segments = topo.segments();
    topo.interference_pairs.clear();
    for (std::size_t i = 0; i < segments.size(); ++i) {
      for (std::size_t j = i + 1; j < segments.size(); ++j) {
        if (interfering.contains({segments[i].link, segments[j].link})) {
          topo.interference_pairs.push_back({segments[i], segments[j]});
        }
      }
    }
  }

  std::optional<NodeId> next_hop(const Flow& flow, NodeId at) const {
    for (const auto& l : flow.path) {
      if (l.src == at) return l.dst;
    }
    return std::nullopt;
  }

  void drop_queue(NodeId node, FlowId flow) {
    auto it = queues.find({node, flow});
    if (it == queues.end()) return;
    flows[flow].dropped += static_cast<std::int64_t>(it->second.packets.size());
    flows[flow].bi_dropped += static_cast<std::int64_t>(it->second.packets.size());
    node_bytes[node] -= it->second.bytes;
    queues.erase(it);
  }

  void apply(const Event& event) {
    if (const auto* r = std::get_if<Reroute>(&event)) {
      const Flow before = *topo.find_flow(r->flow);
      apply_event(topo, event);
      const Flow& after = *topo.find_flow(r->flow);
      for (const auto& l : before.path) {
        if (next_hop(after, l.src) != l.dst) drop_queue(l.src, r->flow);
      }
      expand_interference();
      return;
    }
    apply_event(topo, event);
  }

  Plan plan() const {
    const double data = static_cast<double>(cfg.frame.data_interval_us());
    const double stretch = static_cast<double>(cfg.frame.superframe_us) / data;
    const double headroom = cfg.sp_headroom ? cfg.frame.service_periods * bits() / data : 0.0;

    // Rates below are per unit of data-interval time: a flow must move
    // d * BI bits within the data interval to keep up with demand d.
    Topology scaled = topo;
    for (auto& f : scaled.flows) {
      if (std::isfinite(f.demand_mbps) && f.demand_mbps > 0.0) {
        f.demand_mbps = f.demand_mbps * stretch + headroom;
      }
    }
    const auto graph = build_conflict_graph(scaled, cfg.conflict);
    const auto cliques = enumerate_cliques(graph);

    Plan out;
    out.alloc = allocate(cfg.allocator, scaled, cliques, cfg.alloc);
    const auto hierarchy = build_hierarchy(scaled, conflict_nodes(scaled));
    for (int attempt = 0;; ++attempt) {
      try {
        out.schedule = assign_slots(hierarchy, cliques, out.alloc, cfg.frame);
        break;
      } catch (const SchedulingError&) {
        if (attempt >= 60) throw;
        out.scale *= 0.97;
        for (auto& [_, r] : out.alloc.rates) r *= 0.97;
        for (auto& [_, t] : out.alloc.airtimes) t *= 0.97;
      }
    }
    for (const auto& c : cliques) {
      const double airtime = out.alloc.clique_airtime(c);
      out.cliques.push_back({c.id, c.segments, airtime, airtime >= cfg.alloc.budget() - 1e-6});
    }
    return out;
  }

  void push(SimEvent e) {
    e.seq = seq++;
    heap.push(e);
  }

  bool enqueue(NodeId node, const Packet& p) {
    Queue& q = queues[{node, p.flow}];
    if (q.bytes + p.bytes > cfg.queue_limit_bytes) {
      flows[p.flow].dropped++;
      flows[p.flow].bi_dropped++;
      return false;
    }
    q.packets.push_back(p);
    q.bytes += p.bytes;
    auto& nb = node_bytes[node];
    nb += p.bytes;
    auto& peak = peak_bytes[node];
    peak = std::max(peak, nb);
    return true;
  }

  // Source arrivals up to `until` (inclusive unless `strict`).
  void generate(FlowId id, double until, bool strict) {
    FlowState& st = flows[id];
    if (std::isinf(st.demand) || !(st.demand > 0.0)) return;
    const Flow* flow = topo.find_flow(id);
    const double interval = bits() / st.demand;
    while (strict ? st.next_arrival < until : st.next_arrival <= until) {
      st.generated++;
      st.bi_generated++;
      enqueue(flow->source(), {id, st.next_arrival, cfg.packet_bytes});
      st.next_arrival += interval;
    }
  }

  void try_send(const FlowSegment& seg, double now) {
    auto txit = tx.find(seg);
    if (txit == tx.end()) return;
    Transmitter& t = txit->second;
    if (t.busy || now >= t.active_end) return;
    const Flow* flow = topo.find_flow(seg.flow);
    if (flow == nullptr) return;
    const NodeId i = seg.link.src;
    if (next_hop(*flow, i) != seg.link.dst) return;

    FlowState& st = flows[seg.flow];
    const bool at_source = i == flow->source();
    if (at_source) generate(seg.flow, now, false);
    Queue& q = queues[{i, seg.flow}];
    if (q.packets.empty()) {
      if (at_source && std::isinf(st.demand)) {
        st.generated++;
        st.bi_generated++;
        enqueue(i, {seg.flow, now, cfg.packet_bytes});
      } else {
        if (at_source && st.next_arrival < t.active_end) {
          SimEvent w;
          w.t = st.next_arrival;
          w.kind = Kind::wake;
          w.segment = seg;
          w.epoch = t.epoch;
          push(w);
        }
        return;
      }
    }
    const double cap = topo.capacity(seg.link);
    if (!(cap > 0.0)) return;
    const Packet p = q.packets.front();
    const double duration = 8.0 * p.bytes / cap;
    if (now + duration > t.active_end + 1e-9) return;
    q.packets.pop_front();
    q.bytes -= p.bytes;
    node_bytes[i] -= p.bytes;
    t.busy = true;
    max_tx_us = std::max(max_tx_us, duration);
    if (interferers.contains(seg.link)) records[seg.link].push_back({now, now + duration});
    SimEvent done;
    done.t = now + duration;
    done.kind = Kind::tx_done;
    done.segment = seg;
    done.tx_start = now;
    done.packet = p;
    push(done);
  }

  bool interfered(LinkKey link, double start, double end) const {
    auto it = interferers.find(link);
    if (it == interferers.end()) return false;
    constexpr double eps = 1e-9;
    for (LinkKey other : it->second) {
      auto rec = records.find(other);
      if (rec == records.end()) continue;
      const auto& list = rec->second;
      auto hi = std::lower_bound(list.begin(), list.end(), end - eps,
                                 [](const TxRecord& r, double t) { return r.start < t; });
      for (auto r = hi; r != list.begin();) {
        --r;
        if (r->start + max_tx_us + eps < start) break;
        if (r->start < end - eps && start < r->end - eps) return true;
      }
    }
    return false;
  }

  void on_tx_done(const SimEvent& e) {
    Transmitter& t = tx[e.segment];
    t.busy = false;
    FlowState& st = flows[e.segment.flow];
    const Flow* flow = topo.find_flow(e.segment.flow);
    if (interfered(e.segment.link, e.tx_start, e.t)) {
      interference_losses++;
      st.dropped++;
      st.bi_dropped++;
    } else if (e.segment.link.dst == flow->sink()) {
      st.delivered++;
      st.bi_delivered++;
      const double delay = e.t - e.packet.created_us;
      st.bi_delay_sum += delay;
      st.bi_delay_max = std::max(st.bi_delay_max, delay);
    } else {
      const NodeId j = e.segment.link.dst;
      if (enqueue(j, e.packet)) {
        if (auto nh = next_hop(*flow, j)) try_send({flow->id, {j, *nh}}, e.t);
      }
    }
    try_send(e.segment, e.t);
  }

  BiReport step(const std::vector<Event>& events) {
    const double t0 = static_cast<double>(bi) * static_cast<double>(cfg.frame.superframe_us);
    for (auto& [_, st] : flows) {
      st.bi_generated = st.bi_delivered = st.bi_dropped = 0;
      st.bi_delay_sum = st.bi_delay_max = 0.0;
    }
    // Packets lost to a reroute count against the BI it happens in.
    for (const auto& ev : events) apply(ev);

    for (auto& f : topo.flows) {
      FlowState& st = flows[f.id];
      if (st.demand != f.demand_mbps) {
        const bool restart = !(st.demand > 0.0) || std::isinf(st.demand);
        st.demand = f.demand_mbps;
        if (restart || std::isinf(st.demand)) st.next_arrival = first_arrival(st, t0);
      }
    }

    Plan fresh = plan();
    if (bi == 0) {
      current = fresh;
    } else {
      current = std::move(pending);
    }
    pending = std::move(fresh);

    peak_bytes = node_bytes;
    records.clear();
    max_tx_us = 0.0;
    interference_losses = 0;
    tx.clear();
    const double data_start = t0 + static_cast<double>(cfg.frame.overhead_us);
    for (const auto& slot : current.schedule.slots) {
      tx.try_emplace(slot.segment);
      SimEvent e;
      e.t = data_start + static_cast<double>(slot.start_us);
      e.kind = Kind::slot_start;
      e.segment = slot.segment;
      e.slot_end = data_start + static_cast<double>(slot.end_us());
      push(e);
    }

    while (!heap.empty()) {
      const SimEvent e = heap.top();
      heap.pop();
      switch (e.kind) {
        case Kind::slot_start: {
          Transmitter& t = tx[e.segment];
          t.active_end = e.slot_end;
          t.epoch++;
          try_send(e.segment, e.t);
          break;
        }
        case Kind::wake:
          if (tx[e.segment].epoch == e.epoch) try_send(e.segment, e.t);
          break;
        case Kind::tx_done:
          on_tx_done(e);
          break;
      }
    }

    const double t1 = t0 + static_cast<double>(cfg.frame.superframe_us);
    for (auto& f : topo.flows) generate(f.id, t1, true);

    BiReport report;
    report.bi = bi;
    report.peak_queue_bytes = peak_bytes;
    report.interference_losses = interference_losses;
    report.cliques = pending.cliques;
    report.schedule_scale = pending.scale;
    const double sf = static_cast<double>(cfg.frame.superframe_us);
    const double fraction = cfg.frame.data_fraction();
    std::map<FlowId, std::int64_t> queued;
    for (const auto& [key, q] : queues) queued[key.second] += static_cast<std::int64_t>(q.packets.size());
    for (const auto& f : topo.flows) {
      const FlowState& st = flows[f.id];
      FlowReport fr;
      fr.flow = f.id;
      fr.demand_mbps = f.demand_mbps;
      fr.allocated_mbps = current.alloc.rate(f.id) * fraction;
      fr.delivered_mbps = static_cast<double>(st.bi_delivered) * bits() / sf;
      fr.mean_delay_us = st.bi_delivered > 0 ? st.bi_delay_sum / static_cast<double>(st.bi_delivered) : 0.0;
      fr.max_delay_us = st.bi_delay_max;
      fr.generated = st.bi_generated;
      fr.delivered = st.bi_delivered;
      fr.dropped = st.bi_dropped;
      fr.queued = queued[f.id];
      fr.total_generated = st.generated;
      fr.total_delivered = st.delivered;
      fr.total_dropped = st.dropped;
      report.flows.push_back(fr);
    }
    ++bi;
    return report;
  }
};

Simulator::Simulator(Topology topology, SimConfig config)
    : impl_(std::make_unique<Impl>(std::move(topology), std::move(config))) {}
Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

BiReport Simulator::step(const std::vector<Event>& events) { return impl_->step(events); }
int Simulator::next_bi() const { return impl_->bi; }
const Topology& Simulator::topology() const { return impl_->topo; }
const Schedule& Simulator::schedule() const { return impl_->current.schedule; }
const AllocationVector& Simulator::allocation() const { return impl_->current.alloc; }

std::vector<BiReport> run(const Topology& topology, const Scenario& scenario, const SimConfig& config) {
  Simulator sim(topology, config);
  std::vector<BiReport> out;
  auto next = scenario.events.begin();
  for (int b = 0; b < scenario.duration_bi; ++b) {
    std::vector<Event> due;
    for (; next != scenario.events.end() && next->bi == b; ++next) due.push_back(next->event);
    out.push_back(sim.step(due));
  }
  return out;
}

}  // namespace mmfair
