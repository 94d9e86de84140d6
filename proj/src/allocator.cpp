#include "mmfair/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "mmfair/lp.hpp"

namespace mmfair {

void AllocatorConfig::validate() const {
  if (!(epsilon_kbps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(tau >= 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in [0, 1)");
}

double AllocationVector::rate(FlowId flow) const {
  auto it = rates.find(flow);
  return it == rates.end() ? 0.0 : it->second;
}

double AllocationVector::airtime(const FlowSegment& segment) const {
  auto it = airtimes.find(segment);
  return it == airtimes.end() ? 0.0 : it->second;
}

double AllocationVector::clique_airtime(const Clique& clique) const {
  double sum = 0.0;
  for (const auto& s : clique.segments) sum += airtime(s);
  return sum;
}

double AllocationVector::total_rate() const {
  double sum = 0.0;
  for (const auto& [_, r] : rates) sum += r;
  return sum;
}

std::vector<double> AllocationVector::rate_vector() const {
  std::vector<double> out;
  out.reserve(rates.size());
  for (const auto& [_, r] : rates) out.push_back(r);
  return out;
}

void derive_airtimes(AllocationVector& alloc, const Topology& topology) {
  alloc.airtimes.clear();
  for (const auto& flow : topology.flows) {
    const double r = alloc.rate(flow.id);
    for (const auto& link : flow.path) {
      const double c = topology.capacity(link);
      alloc.airtimes[{flow.id, link}] = c > 0.0 ? r / c : 0.0;
    }
  }
}

namespace {

bool has_blocked_link(const Topology& topology, const Flow& flow) {
  return std::any_of(flow.path.begin(), flow.path.end(),
                     [&](const LinkKey& l) { return !(topology.capacity(l) > 0.0); });
}

// Per-clique view used by the sweep: which flows own member segments and
// with what inverse capacity.
struct CliqueTerms {
  std::vector<std::size_t> flow;
  std::vector<double> inverse_capacity;
};

std::vector<CliqueTerms> clique_terms(const Topology& topology, const CliqueSet& cliques,
                                      const std::map<FlowId, std::size_t>& index,
                                      const std::vector<char>& blocked) {
  std::vector<CliqueTerms> out(cliques.size());
  for (std::size_t q = 0; q < cliques.size(); ++q) {
    for (const auto& s : cliques[q].segments) {
      auto it = index.find(s.flow);
      if (it == index.end() || blocked[it->second]) continue;
      out[q].flow.push_back(it->second);
      out[q].inverse_capacity.push_back(1.0 / topology.capacity(s.link));
    }
  }
  return out;
}

}  // namespace

AllocationVector progressive_filling(const Topology& topology, const CliqueSet& cliques,
                                     const AllocatorConfig& config) {
  config.validate();
  const std::size_t n = topology.flows.size();
  const double eps = config.epsilon_mbps();
  const double budget = config.budget();

  std::map<FlowId, std::size_t> index;
  for (std::size_t f = 0; f < n; ++f) index[topology.flows[f].id] = f;

  std::vector<double> rate(n, 0.0);
  std::vector<char> active(n, 1);
  std::vector<char> blocked(n, 0);
  double max_capacity = 0.0;
  for (std::size_t f = 0; f < n; ++f) {
    if (has_blocked_link(topology, topology.flows[f])) {
      blocked[f] = 1;
      active[f] = 0;
    }
    for (const auto& l : topology.flows[f].path) max_capacity = std::max(max_capacity, topology.capacity(l));
  }

  const auto terms = clique_terms(topology, cliques, index, blocked);
  // membership[f] = (clique, inverse capacity) for every segment of f
  std::vector<std::vector<std::pair<std::size_t, double>>> membership(n);
  for (std::size_t q = 0; q < terms.size(); ++q) {
    for (std::size_t m = 0; m < terms[q].flow.size(); ++m) {
      membership[terms[q].flow[m]].emplace_back(q, terms[q].inverse_capacity[m]);
    }
  }

  // Running clique state: airtime held by frozen flows, inverse-capacity
  // sum and count of segments of still-active flows.
  std::vector<double> frozen_airtime(cliques.size(), 0.0);
  std::vector<double> active_inverse(cliques.size(), 0.0);
  std::vector<std::size_t> active_segments(cliques.size(), 0);
  for (std::size_t f = 0; f < n; ++f) {
    if (!active[f]) continue;
    for (const auto& [q, inv] : membership[f]) {
      active_inverse[q] += inv;
      ++active_segments[q];
    }
  }

  auto freeze = [&](std::size_t f, double value) {
    rate[f] = value;
    active[f] = 0;
    for (const auto& [q, inv] : membership[f]) {
      active_inverse[q] -= inv;
      --active_segments[q];
      frozen_airtime[q] += value * inv;
    }
  };

  std::size_t remaining = static_cast<std::size_t>(std::count(active.begin(), active.end(), 1));
  // Every active flow saturates some clique by the time its rate reaches
  // budget * capacity of its links, so the sweep is bounded.
  const auto iteration_cap = static_cast<std::size_t>(std::ceil(budget * max_capacity / eps)) + 2;
  std::size_t step = 0;

  while (remaining > 0) {
    if (step > iteration_cap) {
      throw AllocationError("progressive filling exceeded its iteration bound");
    }
    ++step;
    const double level = static_cast<double>(step) * eps;

    for (std::size_t f = 0; f < n; ++f) {
      if (active[f] && level >= topology.flows[f].demand_mbps) {
        freeze(f, topology.flows[f].demand_mbps);
        --remaining;
      }
    }

    // Saturated cliques are resolved lowest common rate first; ties go to
    // the smaller clique id.
    for (;;) {
      std::size_t pick = cliques.size();
      double pick_rate = std::numeric_limits<double>::infinity();
      for (std::size_t q = 0; q < cliques.size(); ++q) {
        if (active_segments[q] == 0) continue;
        if (frozen_airtime[q] + level * active_inverse[q] < budget) continue;
        const double r = std::max(0.0, (budget - frozen_airtime[q]) / active_inverse[q]);
        if (r < pick_rate) {
          pick_rate = r;
          pick = q;
        }
      }
      if (pick == cliques.size()) break;
      if (config.freeze_scope == FreezeScope::clique) {
        std::vector<std::size_t> members = terms[pick].flow;
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        for (std::size_t f : members) {
          if (active[f]) {
            freeze(f, pick_rate);
            --remaining;
          }
        }
      } else {
        for (std::size_t f = 0; f < n; ++f) {
          if (active[f]) {
            freeze(f, pick_rate);
            --remaining;
          }
        }
      }
    }
  }

  AllocationVector out;
  out.iterations = step;
  for (std::size_t f = 0; f < n; ++f) {
    out.rates[topology.flows[f].id] = rate[f];
    if (blocked[f]) out.blocked.insert(topology.flows[f].id);
  }
  derive_airtimes(out, topology);
  return out;
}

namespace {

double bottleneck_capacity(const Topology& topology, const Flow& flow) {
  double c = std::numeric_limits<double>::infinity();
  for (const auto& l : flow.path) c = std::min(c, topology.capacity(l));
  return c;
}

}  // namespace

AllocationVector max_throughput_allocation(const Topology& topology, const CliqueSet& cliques,
                                           const AllocatorConfig& config) {
  config.validate();
  const double budget = config.budget();
  AllocationVector out;

  std::vector<std::size_t> usable;
  for (std::size_t f = 0; f < topology.flows.size(); ++f) {
    const Flow& flow = topology.flows[f];
    out.rates[flow.id] = 0.0;
    if (has_blocked_link(topology, flow)) {
      out.blocked.insert(flow.id);
    } else {
      usable.push_back(f);
    }
  }
  const auto n = static_cast<Eigen::Index>(usable.size());
  if (n == 0) {
    derive_airtimes(out, topology);
    return out;
  }

  std::map<FlowId, Eigen::Index> column;
  for (Eigen::Index v = 0; v < n; ++v) column[topology.flows[usable[static_cast<std::size_t>(v)]].id] = v;

  // Base rows: one per clique plus one per finite demand.
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (const auto& clique : cliques) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    for (const auto& s : clique.segments) {
      auto it = column.find(s.flow);
      if (it != column.end()) row(it->second) += 1.0 / topology.capacity(s.link);
    }
    if (row.cwiseAbs().maxCoeff() > 0.0) {
      rows.push_back(row);
      rhs.push_back(budget);
    }
  }
  for (Eigen::Index v = 0; v < n; ++v) {
    const double d = topology.flows[usable[static_cast<std::size_t>(v)]].demand_mbps;
    if (std::isfinite(d)) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
      row(v) = 1.0;
      rows.push_back(row);
      rhs.push_back(d);
    }
  }

  auto solve = [&](const Eigen::VectorXd& objective, const std::vector<Eigen::VectorXd>& extra_rows,
                   const std::vector<double>& extra_rhs) {
    lp::Problem<double> problem(static_cast<Eigen::Index>(rows.size() + extra_rows.size()), n);
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < rows.size(); ++i, ++r) {
      problem.A.row(r) = rows[i].transpose();
      problem.b(r) = rhs[i];
    }
    for (std::size_t i = 0; i < extra_rows.size(); ++i, ++r) {
      problem.A.row(r) = extra_rows[i].transpose();
      problem.b(r) = extra_rhs[i];
    }
    problem.c = objective;
    auto solution = lp::solve(problem);
    if (solution.status != lp::Status::optimal) {
      throw AllocationError("max-throughput program has no optimum");
    }
    return solution;
  };

  constexpr double slack = 1e-9;
  auto first = solve(Eigen::VectorXd::Ones(n), {}, {});
  std::vector<Eigen::VectorXd> extra_rows{-Eigen::VectorXd::Ones(n)};
  std::vector<double> extra_rhs{-first.objective * (1.0 - slack)};
  Eigen::VectorXd x = first.x;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return bottleneck_capacity(topology, topology.flows[usable[static_cast<std::size_t>(a)]]) >
           bottleneck_capacity(topology, topology.flows[usable[static_cast<std::size_t>(b)]]);
  });
  for (Eigen::Index v : order) {
    Eigen::VectorXd objective = Eigen::VectorXd::Zero(n);
    objective(v) = 1.0;
    auto best = solve(objective, extra_rows, extra_rhs);
    x = best.x;
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    row(v) = -1.0;
    extra_rows.push_back(row);
    extra_rhs.push_back(-best.objective * (1.0 - slack));
  }

  for (Eigen::Index v = 0; v < n; ++v) {
    const Flow& flow = topology.flows[usable[static_cast<std::size_t>(v)]];
    // Solver noise from the tie-break slack is not a real allocation.
    const double r = x(v) < 1e-6 * std::max(1.0, first.objective) ? 0.0 : x(v);
    out.rates[flow.id] = std::min(r, flow.demand_mbps);
  }
  derive_airtimes(out, topology);
  return out;
}

AllocationVector round_robin_allocation(const Topology& topology, const CliqueSet& cliques,
                                        const AllocatorConfig& config) {
  config.validate();
  const double budget = config.budget();
  std::map<FlowSegment, double> share;
  for (const auto& clique : cliques) {
    const double each = budget / static_cast<double>(clique.segments.size());
    for (const auto& s : clique.segments) {
      auto [it, inserted] = share.emplace(s, each);
      if (!inserted) it->second = std::min(it->second, each);
    }
  }
  AllocationVector out;
  for (const auto& flow : topology.flows) {
    if (has_blocked_link(topology, flow)) {
      out.rates[flow.id] = 0.0;
      out.blocked.insert(flow.id);
      continue;
    }
    double r = flow.demand_mbps;
    for (const auto& link : flow.path) {
      auto it = share.find({flow.id, link});
      const double t = it == share.end() ? budget : it->second;
      r = std::min(r, t * topology.capacity(link));
    }
    out.rates[flow.id] = r;
  }
  derive_airtimes(out, topology);
  return out;
}

AllocatorKind parse_allocator_kind(const std::string& name) {
  if (name == "wihaul") return AllocatorKind::wihaul;
  if (name == "maxthroughput") return AllocatorKind::max_throughput;
  if (name == "roundrobin") return AllocatorKind::round_robin;
  throw std::invalid_argument("unknown allocator '" + name + "'");
}

std::string to_string(AllocatorKind kind) {
  switch (kind) {
    case AllocatorKind::wihaul: return "wihaul";
    case AllocatorKind::max_throughput: return "maxthroughput";
    case AllocatorKind::round_robin: return "roundrobin";
  }
  return "unknown";
}

AllocationVector allocate(AllocatorKind kind, const Topology& topology, const CliqueSet& cliques,
                          const AllocatorConfig& config) {
  switch (kind) {
    case AllocatorKind::wihaul: return progressive_filling(topology, cliques, config);
    case AllocatorKind::max_throughput: return max_throughput_allocation(topology, cliques, config);
    case AllocatorKind::round_robin: return round_robin_allocation(topology, cliques, config);
  }
  throw std::invalid_argument("unknown allocator");
}

MaxMinVerdict verify_max_min(const AllocationVector& alloc, const Topology& topology,
                             const CliqueSet& cliques, const AllocatorConfig& config) {
  const double budget = config.budget();
  constexpr double airtime_tol = 1e-6;
  auto rate_tol = [](double r) { return 1e-6 * std::max(1.0, std::abs(r)); };

  MaxMinVerdict verdict;
  auto fail = [&](std::optional<FlowId> who, std::string why) {
    verdict.max_min_fair = false;
    verdict.witness = who;
    verdict.reason = std::move(why);
    return verdict;
  };

  for (const auto& flow : topology.flows) {
    const double r = alloc.rate(flow.id);
    if (r > flow.demand_mbps + rate_tol(flow.demand_mbps) || r < -rate_tol(0.0)) {
      return fail(flow.id, "flow " + std::to_string(flow.id) + " rate outside [0, demand]");
    }
  }
  std::vector<double> load(cliques.size());
  for (std::size_t q = 0; q < cliques.size(); ++q) {
    load[q] = alloc.clique_airtime(cliques[q]);
    if (load[q] > budget + airtime_tol) {
      std::ostringstream os;
      os << "clique " << cliques[q].id << " airtime " << load[q] << " exceeds budget " << budget;
      return fail(std::nullopt, os.str());
    }
  }

  for (const auto& flow : topology.flows) {
    if (alloc.blocked.contains(flow.id)) continue;
    const double r = alloc.rate(flow.id);
    if (r >= flow.demand_mbps - rate_tol(flow.demand_mbps)) continue;
    bool bottlenecked = false;
    for (std::size_t q = 0; q < cliques.size() && !bottlenecked; ++q) {
      const auto& members = cliques[q].segments;
      const bool touches = std::any_of(members.begin(), members.end(),
                                       [&](const FlowSegment& s) { return s.flow == flow.id; });
      if (!touches || load[q] < budget - airtime_tol) continue;
      bottlenecked = std::all_of(members.begin(), members.end(), [&](const FlowSegment& s) {
        return alloc.rate(s.flow) <= r + rate_tol(r);
      });
    }
    if (!bottlenecked) {
      return fail(flow.id, "flow " + std::to_string(flow.id) +
                               " is below demand without a saturated bottleneck clique");
    }
  }
  return verdict;
}

}  // namespace mmfair
