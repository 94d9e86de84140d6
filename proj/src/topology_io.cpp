#include "mmfair/topology_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

namespace mmfair {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  if (!obj.is_object()) {
    throw LoadError(where + ": expected an object");
  }
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* name : allowed) {
      if (key == name) {
        ok = true;
        break;
      }
    }
    if (!ok) throw LoadError(where + ": unknown field '" + key + "'");
  }
}

template <typename T>
T require(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw LoadError(where + ": missing field '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw LoadError(where + ": field '" + key + "' has the wrong type");
  }
}

template <typename T>
T optional(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw LoadError(where + ": field '" + key + "' has the wrong type");
  }
}

double parse_demand(const json& value, const std::string& where) {
  if (value.is_string()) {
    if (value.get<std::string>() == "backlogged") return std::numeric_limits<double>::infinity();
    throw LoadError(where + ": demand_mbps must be a number or \"backlogged\"");
  }
  if (!value.is_number()) throw LoadError(where + ": demand_mbps must be a number");
  return value.get<double>();
}

FlowSegment parse_segment(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 3) {
    throw LoadError(where + ": segment must be [flow, src, dst]");
  }
  try {
    return {value[0].get<FlowId>(), {value[1].get<NodeId>(), value[2].get<NodeId>()}};
  } catch (const json::exception&) {
    throw LoadError(where + ": segment entries must be integers");
  }
}

}  // namespace

json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw LoadError("cannot open " + file.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw LoadError(file.string() + ": " + e.what());
  }
}

McsTable parse_mcs_table(const json& doc) {
  reject_unknown(doc, {"rows"}, "mcs_table");
  std::vector<McsRow> rows;
  const json& list = doc.at("rows");
  if (!list.is_array()) throw LoadError("mcs_table: rows must be an array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "mcs_table.rows[" + std::to_string(i) + "]";
    reject_unknown(list[i], {"min_snr_db", "bitrate_mbps"}, where);
    rows.push_back({require<double>(list[i], "min_snr_db", where),
                    require<double>(list[i], "bitrate_mbps", where)});
  }
  try {
    return McsTable(std::move(rows));
  } catch (const std::invalid_argument& e) {
    throw LoadError(std::string("mcs_table: ") + e.what());
  }
}

McsTable load_mcs_table(const std::filesystem::path& file) {
  return parse_mcs_table(read_json_file(file));
}

Topology parse_topology(const json& doc, const std::filesystem::path& base_dir, bool validate) {
  reject_unknown(doc, {"nodes", "links", "flows", "interference_pairs", "mcs_table", "phy",
                       "max_gateways"},
                 "topology");
  Topology topo;
  topo.max_gateways = optional<int>(doc, "max_gateways", 1, "topology");

  if (doc.contains("mcs_table")) {
    const json& mcs = doc.at("mcs_table");
    if (mcs.is_string()) {
      std::filesystem::path p = mcs.get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      topo.mcs = load_mcs_table(p);
    } else {
      topo.mcs = parse_mcs_table(mcs);
    }
  }

  if (doc.contains("phy")) {
    const json& phy = doc.at("phy");
    reject_unknown(phy, {"tx_power_dbm", "tx_gain_db", "rx_gain_db", "carrier_ghz", "noise_floor_dbm"},
                   "phy");
    topo.phy.tx_power_dbm = optional(phy, "tx_power_dbm", topo.phy.tx_power_dbm, "phy");
    topo.phy.tx_gain_db = optional(phy, "tx_gain_db", topo.phy.tx_gain_db, "phy");
    topo.phy.rx_gain_db = optional(phy, "rx_gain_db", topo.phy.rx_gain_db, "phy");
    topo.phy.carrier_ghz = optional(phy, "carrier_ghz", topo.phy.carrier_ghz, "phy");
    topo.phy.noise_floor_dbm = optional(phy, "noise_floor_dbm", topo.phy.noise_floor_dbm, "phy");
  }

  const json& nodes = doc.contains("nodes") ? doc.at("nodes") : json::array();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = "nodes[" + std::to_string(i) + "]";
    reject_unknown(nodes[i], {"id", "x", "y", "gateway"}, where);
    Node node;
    node.id = require<NodeId>(nodes[i], "id", where);
    node.position = {optional(nodes[i], "x", 0.0, where), optional(nodes[i], "y", 0.0, where)};
    node.is_gateway = optional(nodes[i], "gateway", false, where);
    topo.nodes.push_back(node);
  }

  const json& links = doc.contains("links") ? doc.at("links") : json::array();
  for (std::size_t i = 0; i < links.size(); ++i) {
    const std::string where = "links[" + std::to_string(i) + "]";
    reject_unknown(links[i], {"src", "dst", "capacity_mbps", "attenuation_db", "bidirectional"},
                   where);
    Link link;
    link.src = require<NodeId>(links[i], "src", where);
    link.dst = require<NodeId>(links[i], "dst", where);
    link.attenuation_db = optional(links[i], "attenuation_db", 0.0, where);
    if (!links[i].contains("capacity_mbps")) {
      throw LoadError(where + ": missing field 'capacity_mbps'");
    }
    const json& cap = links[i].at("capacity_mbps");
    if (cap.is_string() && cap.get<std::string>() == "auto") {
      link.auto_rate = true;
    } else if (cap.is_number()) {
      link.capacity_mbps = cap.get<double>();
    } else {
      throw LoadError(where + ": capacity_mbps must be a number or \"auto\"");
    }
    topo.links.push_back(link);
    if (optional(links[i], "bidirectional", false, where)) {
      Link back = link;
      std::swap(back.src, back.dst);
      topo.links.push_back(back);
    }
  }

  const json& flows = doc.contains("flows") ? doc.at("flows") : json::array();
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const std::string where = "flows[" + std::to_string(i) + "]";
    reject_unknown(flows[i], {"id", "demand_mbps", "path", "direction"}, where);
    Flow flow;
    flow.id = require<FlowId>(flows[i], "id", where);
    if (!flows[i].contains("demand_mbps")) throw LoadError(where + ": missing field 'demand_mbps'");
    flow.demand_mbps = parse_demand(flows[i].at("demand_mbps"), where);
    flow.path = path_from_nodes(require<std::vector<NodeId>>(flows[i], "path", where));
    const auto dir = optional<std::string>(flows[i], "direction", "downlink", where);
    if (dir == "downlink") {
      flow.direction = Direction::downlink;
    } else if (dir == "uplink") {
      flow.direction = Direction::uplink;
    } else {
      throw LoadError(where + ": direction must be \"downlink\" or \"uplink\"");
    }
    topo.flows.push_back(std::move(flow));
  }

  const json& pairs = doc.contains("interference_pairs") ? doc.at("interference_pairs") : json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string where = "interference_pairs[" + std::to_string(i) + "]";
    if (!pairs[i].is_array() || pairs[i].size() != 2) {
      throw LoadError(where + ": expected a pair of segments");
    }
    topo.interference_pairs.push_back(
        {parse_segment(pairs[i][0], where), parse_segment(pairs[i][1], where)});
  }

  for (const auto& link : topo.links) {
    const Node* a = topo.find_node(link.src);
    const Node* b = topo.find_node(link.dst);
    if (!link.auto_rate || a == nullptr || b == nullptr) continue;
    if (!(distance(a->position, b->position) > 0.0)) {
      throw LoadError("link " + std::to_string(link.src) + "->" + std::to_string(link.dst) +
                      ": auto capacity needs distinct node positions");
    }
  }
  topo.refresh_auto_rates();

  if (validate) {
    const auto violations = validate_topology(topo);
    if (!violations.empty()) {
      std::ostringstream os;
      os << "invalid topology:";
      for (const auto& v : violations) os << "\n  " << to_string(v.kind) << ": " << v.message;
      throw LoadError(os.str());
    }
  }
  return topo;
}

Topology load_topology(const std::filesystem::path& file, bool validate) {
  try {
    return parse_topology(read_json_file(file), file.parent_path(), validate);
  } catch (const LoadError& e) {
    const std::string what = e.what();
    if (what.rfind(file.string(), 0) == 0) throw;
    throw LoadError(file.string() + ": " + what);
  }
}

json topology_to_json(const Topology& topology) {
  json doc;
  doc["max_gateways"] = topology.max_gateways;
  doc["phy"] = {{"tx_power_dbm", topology.phy.tx_power_dbm},
                {"tx_gain_db", topology.phy.tx_gain_db},
                {"rx_gain_db", topology.phy.rx_gain_db},
                {"carrier_ghz", topology.phy.carrier_ghz},
                {"noise_floor_dbm", topology.phy.noise_floor_dbm}};
  json rows = json::array();
  for (const auto& row : topology.mcs.rows()) {
    rows.push_back({{"min_snr_db", row.min_snr_db}, {"bitrate_mbps", row.bitrate_mbps}});
  }
  doc["mcs_table"] = {{"rows", rows}};
  doc["nodes"] = json::array();
  for (const auto& n : topology.nodes) {
    doc["nodes"].push_back({{"id", n.id}, {"x", n.position.x}, {"y", n.position.y}, {"gateway", n.is_gateway}});
  }
  doc["links"] = json::array();
  for (const auto& l : topology.links) {
    json link = {{"src", l.src}, {"dst", l.dst}, {"attenuation_db", l.attenuation_db}};
    if (l.auto_rate) {
      link["capacity_mbps"] = "auto";
    } else {
      link["capacity_mbps"] = l.capacity_mbps;
    }
    doc["links"].push_back(link);
  }
  doc["flows"] = json::array();
  for (const auto& f : topology.flows) {
    json flow = {{"id", f.id},
                 {"path", nodes_on_path(f.path)},
                 {"direction", f.direction == Direction::downlink ? "downlink" : "uplink"}};
    if (f.backlogged()) {
      flow["demand_mbps"] = "backlogged";
    } else {
      flow["demand_mbps"] = f.demand_mbps;
    }
    doc["flows"].push_back(flow);
  }
  doc["interference_pairs"] = json::array();
  for (const auto& p : topology.interference_pairs) {
    doc["interference_pairs"].push_back(
        json::array({json::array({p.a.flow, p.a.link.src, p.a.link.dst}),
                     json::array({p.b.flow, p.b.link.src, p.b.link.dst})}));
  }
  return doc;
}

}  // namespace mmfair
