#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmfair/conflict.hpp"
#include "mmfair/model.hpp"

namespace mmfair {

/// Which active flows a clique saturation freezes.
enum class FreezeScope {
  clique,  // only active flows with a segment in the saturated clique
  global,  // every active flow (literal reading of the sweep pseudocode)
};

struct AllocatorConfig {
  double epsilon_kbps = 10.0;
  // Fraction of airtime reserved for beam training; each clique may use
  // at most 1 - tau.
  double tau = 0.1;
  FreezeScope freeze_scope = FreezeScope::clique;

  double epsilon_mbps() const { return epsilon_kbps / 1000.0; }
  double budget() const { return 1.0 - tau; }
  /// Throws std::invalid_argument unless epsilon > 0 and 0 <= tau < 1.
  void validate() const;
};

struct AllocationVector {
  std::map<FlowId, double> rates;
  // Fraction of the data interval granted to each segment.
  std::map<FlowSegment, double> airtimes;
  // Flows with a zero-capacity link on their path.
  std::set<FlowId> blocked;
  // Sweep steps executed (progressive filling only).
  std::size_t iterations = 0;

  double rate(FlowId flow) const;
  double airtime(const FlowSegment& segment) const;
  double clique_airtime(const Clique& clique) const;
  double total_rate() const;
  std::vector<double> rate_vector() const;
};

/// Raised when the sweep guard trips; valid inputs never hit it.
class AllocationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Max-min fair allocation by progressive filling over clique constraints.
AllocationVector progressive_filling(const Topology& topology, const CliqueSet& cliques,
                                     const AllocatorConfig& config);

/// Maximises total throughput under the clique and demand constraints;
/// ties between optimal vectors go to flows with the largest end-to-end
/// bottleneck capacity first.
AllocationVector max_throughput_allocation(const Topology& topology, const CliqueSet& cliques,
                                           const AllocatorConfig& config);

/// Equal airtime per segment within each clique; no reclaiming of surplus.
AllocationVector round_robin_allocation(const Topology& topology, const CliqueSet& cliques,
                                        const AllocatorConfig& config);

enum class AllocatorKind { wihaul, max_throughput, round_robin };

AllocatorKind parse_allocator_kind(const std::string& name);
std::string to_string(AllocatorKind kind);

AllocationVector allocate(AllocatorKind kind, const Topology& topology, const CliqueSet& cliques,
                          const AllocatorConfig& config);

struct MaxMinVerdict {
  bool max_min_fair = true;
  std::optional<FlowId> witness;
  std::string reason;
};

/// True iff every flow is demand-limited, blocked, or has a saturated
/// clique in which no other flow has a higher rate.
MaxMinVerdict verify_max_min(const AllocationVector& alloc, const Topology& topology,
                             const CliqueSet& cliques, const AllocatorConfig& config);

/// Fills airtimes as r_k / c_ij for every segment of every flow in `rates`.
void derive_airtimes(AllocationVector& alloc, const Topology& topology);

}  // namespace mmfair
