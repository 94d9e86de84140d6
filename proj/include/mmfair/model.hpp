#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mmfair {

using NodeId = std::int32_t;
using FlowId = std::int32_t;

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Position& a, const Position& b);

struct Node {
  NodeId id = 0;
  Position position;
  bool is_gateway = false;
};

/// Directed link key (src -> dst).
struct LinkKey {
  NodeId src = 0;
  NodeId dst = 0;

  auto operator<=>(const LinkKey&) const = default;
  LinkKey reversed() const { return {dst, src}; }
};

struct Link {
  NodeId src = 0;
  NodeId dst = 0;
  double capacity_mbps = 0.0;
  // Extra loss on top of free-space path loss; 0 means the nominal state.
  double attenuation_db = 0.0;
  // Capacity is derived from node distance through link_rate() instead of
  // being given explicitly.
  bool auto_rate = false;

  LinkKey key() const { return {src, dst}; }
};

enum class Direction { downlink, uplink };

struct Flow {
  FlowId id = 0;
  // +inf marks a backlogged (saturated) source.
  double demand_mbps = 0.0;
  std::vector<LinkKey> path;
  Direction direction = Direction::downlink;

  NodeId source() const { return path.front().src; }
  NodeId sink() const { return path.back().dst; }
  bool backlogged() const { return demand_mbps == std::numeric_limits<double>::infinity(); }
};

/// The portion of flow `flow` that crosses `link`, ordered by (k, i, j).
struct FlowSegment {
  FlowId flow = 0;
  LinkKey link;

  auto operator<=>(const FlowSegment&) const = default;
};

std::string to_string(const FlowSegment& segment);

struct McsRow {
  double min_snr_db = 0.0;
  double bitrate_mbps = 0.0;
};

class McsTable {
 public:
  McsTable() = default;
  /// Rows must be sorted by threshold with strictly increasing bitrates;
  /// throws std::invalid_argument otherwise.
  explicit McsTable(std::vector<McsRow> rows);

  /// Bitrate of the highest row whose threshold is met, or 0 when the SNR
  /// is below every row.
  double lookup(double snr_db) const;

  const std::vector<McsRow>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }

  /// 802.11ad-style single-carrier/OFDM rates with interpolated thresholds.
  static McsTable default_table();

 private:
  std::vector<McsRow> rows_;
};

struct PhyConfig {
  double tx_power_dbm = 10.0;
  double tx_gain_db = 20.0;
  double rx_gain_db = 20.0;
  double carrier_ghz = 60.0;
  double noise_floor_dbm = -77.0;
};

/// Friis free-space path loss in dB.
double friis_path_loss_db(double distance_m, double carrier_ghz);

double link_snr_db(double distance_m, double attenuation_db, const PhyConfig& phy);

/// Bitrate in Mbps for a link of the given length; 0 signals blockage.
double link_rate(double distance_m, double attenuation_db, const PhyConfig& phy,
                 const McsTable& mcs);

struct SegmentPair {
  FlowSegment a;
  FlowSegment b;
};

class Topology {
 public:
  std::vector<Node> nodes;
  std::vector<Link> links;
  std::vector<Flow> flows;
  // Segment pairs that cannot be active together because of secondary
  // interference between their beams.
  std::vector<SegmentPair> interference_pairs;
  PhyConfig phy;
  McsTable mcs = McsTable::default_table();
  int max_gateways = 1;

  const Node* find_node(NodeId id) const;
  const Link* find_link(LinkKey key) const;
  Link* find_link(LinkKey key);
  const Flow* find_flow(FlowId id) const;
  Flow* find_flow(FlowId id);

  double capacity(LinkKey key) const;

  /// All flow segments, sorted by (k, i, j).
  std::vector<FlowSegment> segments() const;

  /// Recomputes capacity for every auto-rate link from positions, attenuation
  /// and the MCS table.
  void refresh_auto_rates();

  /// Applies `attenuation_db` to the link and its reverse record, then
  /// re-derives capacity if the link is auto-rate.
  void set_attenuation(LinkKey key, double attenuation_db);
  void set_capacity(LinkKey key, double capacity_mbps);
};

/// Converts a node sequence into a chain of link keys.
std::vector<LinkKey> path_from_nodes(const std::vector<NodeId>& nodes);
std::vector<NodeId> nodes_on_path(const std::vector<LinkKey>& path);

enum class ViolationKind {
  duplicate_id,
  too_many_gateways,
  no_gateway,
  unknown_node,
  self_loop,
  duplicate_link,
  invalid_capacity,
  empty_path,
  unknown_link,
  disconnected_path,
  repeated_node,
  negative_demand,
  no_gateway_endpoint,
  invalid_interference_pair,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string message;
};

std::vector<Violation> validate_topology(const Topology& topology);

/// Checks a single path against the topology (chain, existing links,
/// gateway endpoint). Used for reroute events.
std::vector<Violation> validate_path(const Topology& topology, const Flow& flow);

}  // namespace mmfair
