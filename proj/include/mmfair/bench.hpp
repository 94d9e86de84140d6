#pragma once

#include <cstddef>
#include <vector>

#include "mmfair/allocator.hpp"

namespace mmfair {

struct BenchPoint {
  double demand_mbps = 0.0;
  double mean_ms = 0.0;
  double median_ms = 0.0;
  // Half-width of the 95% confidence interval of the mean.
  double ci95_ms = 0.0;
  std::size_t iterations = 0;
  int reps = 0;
};

/// Times progressive filling (clique enumeration excluded) with every flow's
/// demand set to each value in turn.
std::vector<BenchPoint> bench_progressive_filling(const Topology& topology, const std::vector<double>& demands,
                                                  int reps, const AllocatorConfig& config);

/// start, start + step, ... up to and including `stop` (within half a step).
std::vector<double> demand_sweep(double start, double stop, double step);

}  // namespace mmfair
