#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmfair/allocator.hpp"
#include "mmfair/conflict.hpp"
#include "mmfair/model.hpp"

namespace mmfair {

struct ScheduleNode {
  NodeId id = 0;
  int hops = 0;            // shortest distance in links to the nearest gateway
  bool conflict = false;   // forwards traffic for others
  int level = 0;           // 0 for the root coordinator
  std::optional<NodeId> parent;
};

class Hierarchy {
 public:
  Hierarchy() = default;
  Hierarchy(NodeId root, std::vector<ScheduleNode> nodes);

  NodeId root() const { return root_; }
  /// Nodes ordered by (level, id).
  const std::vector<ScheduleNode>& nodes() const { return nodes_; }
  const ScheduleNode& at(NodeId id) const;
  bool contains(NodeId id) const;
  int depth() const;

 private:
  NodeId root_ = 0;
  std::vector<ScheduleNode> nodes_;
  std::map<NodeId, std::size_t> index_;
};

class SchedulingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Link hop count from every reachable node to its nearest gateway; links
/// are treated as undirected for this purpose.
std::map<NodeId, int> hop_distances(const Topology& topology);

/// Root = conflict node closest to a gateway (smallest id on ties); other
/// conflict nodes sit at |H_i - H_root|; leaves sit one level below their
/// neighbouring conflict node, the smallest id winning shared children.
/// Without conflict nodes the hierarchy is rooted at the gateway.
Hierarchy build_hierarchy(const Topology& topology, const std::set<NodeId>& conflict_nodes);

struct FrameConfig {
  std::int64_t superframe_us = 102400;
  std::int64_t overhead_us = 10240;
  int service_periods = 20;

  std::int64_t data_interval_us() const { return superframe_us - overhead_us; }
  double data_fraction() const {
    return static_cast<double>(data_interval_us()) / static_cast<double>(superframe_us);
  }
  void validate() const;
};

struct Slot {
  FlowSegment segment;
  std::int64_t start_us = 0;  // offset inside the data interval
  std::int64_t duration_us = 0;

  std::int64_t end_us() const { return start_us + duration_us; }
};

struct Schedule {
  std::int64_t superframe_us = 0;
  std::int64_t overhead_us = 0;
  std::vector<Slot> slots;

  std::int64_t data_interval_us() const { return superframe_us - overhead_us; }
  std::int64_t scheduled_us(const FlowSegment& segment) const;
  std::int64_t makespan_us() const;
  std::int64_t total_slot_us() const;
};

/// Whole microseconds of data interval owed to `airtime`.
std::int64_t quantized_airtime_us(double airtime, std::int64_t data_interval_us);

/// Top-down slot assignment. Each segment's airtime is cut into
/// `service_periods` short periods, period m released at the start of the
/// m-th slice of the data interval. Segments are placed in hierarchy order
/// (scheduling node level, then id) at the earliest time not taken by a
/// segment that shares a clique with them.
Schedule assign_slots(const Hierarchy& hierarchy, const CliqueSet& cliques,
                      const AllocationVector& alloc, const FrameConfig& frame);

enum class ScheduleViolationKind { overlap, deficit, excess, out_of_bounds };

struct ScheduleViolation {
  ScheduleViolationKind kind;
  std::string message;
};

std::vector<ScheduleViolation> check_schedule(const Schedule& schedule, const CliqueSet& cliques,
                                              const AllocationVector& alloc);

}  // namespace mmfair
