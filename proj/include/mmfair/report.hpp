#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mmfair/allocator.hpp"
#include "mmfair/metrics.hpp"
#include "mmfair/scheduler.hpp"
#include "mmfair/sim.hpp"

namespace mmfair {

// CSV writers. Every file starts with a header row whose column names carry
// their unit.

void write_alloc_csv(std::ostream& out, const Topology& topology, const AllocationVector& alloc);
/// One row per flow segment.
void write_segments_csv(std::ostream& out, const AllocationVector& alloc);
void write_schedule_csv(std::ostream& out, const Schedule& schedule);
void write_reports_csv(std::ostream& out, const std::vector<BiReport>& reports);
void write_clique_csv(std::ostream& out, const std::vector<BiReport>& reports);

struct MetricsRow {
  std::string label;
  MetricsReport metrics;
};
void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);

/// Plain-text block: key = value lines.
void write_metrics_block(std::ostream& out, const MetricsReport& metrics);

/// Per-flow delivered rate averaged over the BIs from `first_bi` on.
std::vector<double> mean_delivered(const std::vector<BiReport>& reports, int first_bi = 0);

}  // namespace mmfair
