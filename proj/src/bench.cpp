#include "mmfair/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace mmfair {

std::vector<BenchPoint> bench_progressive_filling(const Topology& topology, const std::vector<double>& demands,
                                                  int reps, const AllocatorConfig& config) {
  if (reps < 1) throw std::invalid_argument("need at least one repetition");
  const CliqueSet cliques = enumerate_cliques(build_conflict_graph(topology));
  std::vector<BenchPoint> out;
  for (double demand : demands) {
    Topology t = topology;
    for (auto& f : t.flows) f.demand_mbps = demand;
    std::vector<double> ms;
    ms.reserve(static_cast<std::size_t>(reps));
    BenchPoint p;
    p.demand_mbps = demand;
    p.reps = reps;
    for (int i = 0; i < reps; ++i) {
      const auto start = std::chrono::steady_clock::now();
      const AllocationVector alloc = progressive_filling(t, cliques, config);
      const auto stop = std::chrono::steady_clock::now();
      ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
      p.iterations = alloc.iterations;
    }
    double sum = 0.0;
    for (double v : ms) sum += v;
    p.mean_ms = sum / reps;
    double var = 0.0;
    for (double v : ms) var += (v - p.mean_ms) * (v - p.mean_ms);
    if (reps > 1) p.ci95_ms = 1.96 * std::sqrt(var / (reps - 1)) / std::sqrt(static_cast<double>(reps));
    std::sort(ms.begin(), ms.end());
    p.median_ms = reps % 2 ? ms[reps / 2] : 0.5 * (ms[reps / 2 - 1] + ms[reps / 2]);
    out.push_back(p);
  }
  return out;
}

std::vector<double> demand_sweep(double start, double stop, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("demand step must be positive");
  if (stop < start) throw std::invalid_argument("demand range is empty");
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double d = start + step * i;
    if (d > stop + step / 2) break;
    out.push_back(d);
  }
  return out;
}

}  // namespace mmfair
