#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmfair/allocator.hpp"
#include "mmfair/conflict.hpp"
#include "mmfair/model.hpp"
#include "mmfair/scheduler.hpp"

namespace mmfair {

struct SetDemand {
  FlowId flow = 0;
  double demand_mbps = 0.0;
};

struct SetAttenuation {
  LinkKey link;
  double attenuation_db = 0.0;
};

struct SetCapacity {
  LinkKey link;
  double capacity_mbps = 0.0;
};

struct Reroute {
  FlowId flow = 0;
  std::vector<NodeId> path;
};

using Event = std::variant<SetDemand, SetAttenuation, SetCapacity, Reroute>;

struct ScenarioEvent {
  int bi = 0;
  Event event;
};

struct Scenario {
  int duration_bi = 1;
  // Sorted by bi; events sharing a bi keep file order.
  std::vector<ScenarioEvent> events;
};

std::string describe(const Event& event);

/// Checks every event against the topology as it evolves through the
/// scenario; throws LoadError on the first invalid reference.
Scenario parse_scenario(const nlohmann::json& doc, const Topology& topology);
Scenario load_scenario(const std::filesystem::path& file, const Topology& topology);
nlohmann::json scenario_to_json(const Scenario& scenario);

/// Mutates the topology. Throws std::invalid_argument on a dangling
/// reference; scenarios loaded through parse_scenario never do.
void apply_event(Topology& topology, const Event& event);

struct SimConfig {
  AllocatorKind allocator = AllocatorKind::wihaul;
  AllocatorConfig alloc;
  FrameConfig frame;
  ConflictOptions conflict;
  std::uint64_t seed = 1;
  int packet_bytes = 1470;
  std::int64_t queue_limit_bytes = 10'000'000;
  // One spare packet per service period on top of the scaled demand, so
  // that slots lost to packet rounding do not eat into the offered load.
  bool sp_headroom = true;

  void validate() const;
};

struct FlowReport {
  FlowId flow = 0;
  double demand_mbps = 0.0;
  // Rate the schedule in force this BI can carry, over the whole BI.
  double allocated_mbps = 0.0;
  double delivered_mbps = 0.0;
  double mean_delay_us = 0.0;
  double max_delay_us = 0.0;
  std::int64_t generated = 0;  // packets, this BI
  std::int64_t delivered = 0;
  std::int64_t dropped = 0;
  std::int64_t queued = 0;  // at the end of the BI
  std::int64_t total_generated = 0;
  std::int64_t total_delivered = 0;
  std::int64_t total_dropped = 0;
};

struct CliqueReport {
  std::size_t id = 0;
  std::vector<FlowSegment> segments;
  double airtime = 0.0;
  bool saturated = false;
};

struct BiReport {
  int bi = 0;
  std::vector<FlowReport> flows;
  std::map<NodeId, std::int64_t> peak_queue_bytes;
  std::int64_t interference_losses = 0;
  // Cliques of the allocation computed at the start of this BI, which
  // takes effect in the next one.
  std::vector<CliqueReport> cliques;
  // Airtimes had to be scaled down by this factor to fit the data interval.
  double schedule_scale = 1.0;

  const FlowReport& flow(FlowId id) const;
};

/// Packet-level superframe engine. One instance drives one run and holds
/// no state shared with other instances.
class Simulator {
 public:
  Simulator(Topology topology, SimConfig config);
  ~Simulator();
  Simulator(Simulator&&) noexcept;
  Simulator& operator=(Simulator&&) noexcept;

  /// Applies the events, recomputes the allocation for the next BI and
  /// plays out the current one.
  BiReport step(const std::vector<Event>& events = {});

  int next_bi() const;
  const Topology& topology() const;
  /// Schedule and allocation the current BI runs with.
  const Schedule& schedule() const;
  const AllocationVector& allocation() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<BiReport> run(const Topology& topology, const Scenario& scenario, const SimConfig& config);

}  // namespace mmfair
