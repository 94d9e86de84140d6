#include "mmfair/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mmfair {

double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::string to_string(const FlowSegment& segment) {
  std::ostringstream os;
  os << "s(" << segment.flow << ',' << segment.link.src << ',' << segment.link.dst << ')';
  return os.str();
}

McsTable::McsTable(std::vector<McsRow> rows) : rows_(std::move(rows)) {
  for (std::size_t i = 1; i < rows_.size(); ++i) {
    if (rows_[i].min_snr_db < rows_[i - 1].min_snr_db) {
      throw std::invalid_argument("MCS rows must be sorted by min_snr_db");
    }
    if (rows_[i].bitrate_mbps <= rows_[i - 1].bitrate_mbps) {
      throw std::invalid_argument("MCS bitrates must be strictly increasing");
    }
  }
  for (const auto& row : rows_) {
    if (!(row.bitrate_mbps > 0.0)) {
      throw std::invalid_argument("MCS bitrates must be positive");
    }
  }
}

double McsTable::lookup(double snr_db) const {
  double rate = 0.0;
  for (const auto& row : rows_) {
    if (row.min_snr_db <= snr_db) {
      rate = row.bitrate_mbps;
    } else {
      break;
    }
  }
  return rate;
}

McsTable McsTable::default_table() {
  return McsTable({
      {-3.0, 385.0},
      {-1.0, 598.0},
      {0.0, 770.0},
      {2.0, 1155.0},
      {3.5, 1540.0},
      {5.0, 2079.0},
      {7.0, 2772.0},
      {9.0, 3465.0},
      {11.0, 4158.0},
      {13.0, 4620.0},
      {15.0, 4982.0},
      {19.5, 6237.0},
      {21.0, 6756.0},
  });
}

double friis_path_loss_db(double distance_m, double carrier_ghz) {
  constexpr double speed_of_light = 299792458.0;
  const double wavelength = speed_of_light / (carrier_ghz * 1e9);
  return 20.0 * std::log10(4.0 * std::numbers::pi * distance_m / wavelength);
}

double link_snr_db(double distance_m, double attenuation_db, const PhyConfig& phy) {
  return phy.tx_power_dbm + phy.tx_gain_db + phy.rx_gain_db -
         friis_path_loss_db(distance_m, phy.carrier_ghz) - attenuation_db - phy.noise_floor_dbm;
}

double link_rate(double distance_m, double attenuation_db, const PhyConfig& phy,
                 const McsTable& mcs) {
  if (!(distance_m > 0.0)) {
    throw std::invalid_argument("link distance must be positive");
  }
  return mcs.lookup(link_snr_db(distance_m, attenuation_db, phy));
}

const Node* Topology::find_node(NodeId id) const {
  auto it = std::find_if(nodes.begin(), nodes.end(), [id](const Node& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

const Link* Topology::find_link(LinkKey key) const {
  auto it = std::find_if(links.begin(), links.end(),
                         [key](const Link& l) { return l.key() == key; });
  return it == links.end() ? nullptr : &*it;
}

Link* Topology::find_link(LinkKey key) {
  return const_cast<Link*>(std::as_const(*this).find_link(key));
}

const Flow* Topology::find_flow(FlowId id) const {
  auto it = std::find_if(flows.begin(), flows.end(), [id](const Flow& f) { return f.id == id; });
  return it == flows.end() ? nullptr : &*it;
}

Flow* Topology::find_flow(FlowId id) {
  return const_cast<Flow*>(std::as_const(*this).find_flow(id));
}

double Topology::capacity(LinkKey key) const {
  const Link* link = find_link(key);
  if (link == nullptr) {
    throw std::out_of_range("unknown link " + std::to_string(key.src) + "->" +
                            std::to_string(key.dst));
  }
  return link->capacity_mbps;
}

std::vector<FlowSegment> Topology::segments() const {
  std::vector<FlowSegment> out;
  for (const auto& flow : flows) {
    for (const auto& link : flow.path) {
      out.push_back({flow.id, link});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void Topology::refresh_auto_rates() {
  for (auto& link : links) {
    if (!link.auto_rate) continue;
    const Node* a = find_node(link.src);
    const Node* b = find_node(link.dst);
    if (a == nullptr || b == nullptr) continue;
    link.capacity_mbps = link_rate(distance(a->position, b->position), link.attenuation_db, phy, mcs);
  }
}

void Topology::set_attenuation(LinkKey key, double attenuation_db) {
  for (LinkKey k : {key, key.reversed()}) {
    if (Link* link = find_link(k)) {
      link->attenuation_db = attenuation_db;
    }
  }
  refresh_auto_rates();
}

void Topology::set_capacity(LinkKey key, double capacity_mbps) {
  for (LinkKey k : {key, key.reversed()}) {
    if (Link* link = find_link(k)) {
      link->capacity_mbps = capacity_mbps;
      link->auto_rate = false;
    }
  }
}

std::vector<LinkKey> path_from_nodes(const std::vector<NodeId>& nodes) {
  std::vector<LinkKey> path;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    path.push_back({nodes[i - 1], nodes[i]});
  }
  return path;
}

std::vector<NodeId> nodes_on_path(const std::vector<LinkKey>& path) {
  std::vector<NodeId> out;
  if (path.empty()) return out;
  out.push_back(path.front().src);
  for (const auto& link : path) out.push_back(link.dst);
  return out;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::duplicate_id: return "duplicate id";
    case ViolationKind::too_many_gateways: return "too many gateways";
    case ViolationKind::no_gateway: return "no gateway";
    case ViolationKind::unknown_node: return "unknown node";
    case ViolationKind::self_loop: return "self loop";
    case ViolationKind::duplicate_link: return "duplicate link";
    case ViolationKind::invalid_capacity: return "invalid capacity";
    case ViolationKind::empty_path: return "empty path";
    case ViolationKind::unknown_link: return "unknown link";
    case ViolationKind::disconnected_path: return "disconnected path";
    case ViolationKind::repeated_node: return "repeated node";
    case ViolationKind::negative_demand: return "negative demand";
    case ViolationKind::no_gateway_endpoint: return "no gateway endpoint";
    case ViolationKind::invalid_interference_pair: return "invalid interference pair";
  }
  return "unknown";
}

namespace {

std::string link_name(LinkKey key) {
  return std::to_string(key.src) + "->" + std::to_string(key.dst);
}

bool is_gateway(const Topology& topology, NodeId id) {
  const Node* node = topology.find_node(id);
  return node != nullptr && node->is_gateway;
}

}  // namespace

std::vector<Violation> validate_path(const Topology& topology, const Flow& flow) {
  std::vector<Violation> out;
  const std::string who = "flow " + std::to_string(flow.id);
  if (flow.path.empty()) {
    out.push_back({ViolationKind::empty_path, who + " has an empty path"});
    return out;
  }
  for (std::size_t i = 0; i < flow.path.size(); ++i) {
    const LinkKey key = flow.path[i];
    if (topology.find_link(key) == nullptr) {
      out.push_back({ViolationKind::unknown_link, who + " uses unknown link " + link_name(key)});
    }
    if (i > 0 && flow.path[i - 1].dst != key.src) {
      out.push_back({ViolationKind::disconnected_path,
                     who + " path breaks between " + link_name(flow.path[i - 1]) + " and " +
                         link_name(key)});
    }
  }
  std::set<NodeId> seen;
  if (std::none_of(out.begin(), out.end(),
                   [](const Violation& v) { return v.kind == ViolationKind::disconnected_path; })) {
    for (NodeId n : nodes_on_path(flow.path)) {
      if (!seen.insert(n).second) {
        out.push_back({ViolationKind::repeated_node,
                       who + " visits node " + std::to_string(n) + " twice"});
      }
    }
  }
  const NodeId endpoint = flow.direction == Direction::downlink ? flow.source() : flow.sink();
  if (!is_gateway(topology, endpoint)) {
    out.push_back({ViolationKind::no_gateway_endpoint,
                   who + (flow.direction == Direction::downlink ? " does not start" : " does not end") +
                       " at a gateway"});
  }
  return out;
}

std::vector<Violation> validate_topology(const Topology& topology) {
  std::vector<Violation> out;

  std::set<NodeId> node_ids;
  int gateways = 0;
  for (const auto& node : topology.nodes) {
    if (!node_ids.insert(node.id).second) {
      out.push_back({ViolationKind::duplicate_id, "node id " + std::to_string(node.id) + " repeated"});
    }
    if (node.is_gateway) ++gateways;
  }
  if (gateways == 0) {
    out.push_back({ViolationKind::no_gateway, "topology has no gateway"});
  } else if (gateways > topology.max_gateways) {
    out.push_back({ViolationKind::too_many_gateways,
                   std::to_string(gateways) + " gateways exceed the limit of " +
                       std::to_string(topology.max_gateways)});
  }

  std::set<LinkKey> link_keys;
  for (const auto& link : topology.links) {
    const std::string name = "link " + link_name(link.key());
    if (link.src == link.dst) {
      out.push_back({ViolationKind::self_loop, name + " connects a node to itself"});
    }
    for (NodeId end : {link.src, link.dst}) {
      if (!node_ids.contains(end)) {
        out.push_back({ViolationKind::unknown_node, name + " references unknown node " +
                                                        std::to_string(end)});
      }
    }
    if (!link_keys.insert(link.key()).second) {
      out.push_back({ViolationKind::duplicate_link, name + " declared twice"});
    }
    if (!link.auto_rate && !(link.capacity_mbps > 0.0)) {
      out.push_back({ViolationKind::invalid_capacity, name + " needs a positive capacity"});
    }
  }

  std::set<FlowId> flow_ids;
  for (const auto& flow : topology.flows) {
    if (!flow_ids.insert(flow.id).second) {
      out.push_back({ViolationKind::duplicate_id, "flow id " + std::to_string(flow.id) + " repeated"});
    }
    if (flow.demand_mbps < 0.0 || std::isnan(flow.demand_mbps)) {
      out.push_back({ViolationKind::negative_demand,
                     "flow " + std::to_string(flow.id) + " has a negative demand"});
    }
    auto path_violations = validate_path(topology, flow);
    out.insert(out.end(), path_violations.begin(), path_violations.end());
  }

  const auto segments = topology.segments();
  auto known = [&](const FlowSegment& s) {
    return std::binary_search(segments.begin(), segments.end(), s);
  };
  for (const auto& pair : topology.interference_pairs) {
    if (!known(pair.a) || !known(pair.b) || pair.a == pair.b) {
      out.push_back({ViolationKind::invalid_interference_pair,
                     "interference pair " + to_string(pair.a) + " / " + to_string(pair.b) +
                         " does not name two distinct segments"});
    }
  }
  return out;
}

}  // namespace mmfair
