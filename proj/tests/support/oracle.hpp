#pragma once

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "mmfair/conflict.hpp"
#include "mmfair/lp.hpp"
#include "mmfair/model.hpp"

namespace mmfair::testing {

/// Max-min fair rates by repeated LPs: raise the common floor t of the free
/// flows as far as the clique constraints allow, then fix every free flow
/// that cannot go above t without lowering another. Shares nothing with the
/// progressive filling code beyond the topology types.
inline std::map<FlowId, double> lp_max_min(const Topology& topology, const CliqueSet& cliques, double budget) {
  const auto& flows = topology.flows;
  const Eigen::Index n = static_cast<Eigen::Index>(flows.size());
  std::map<FlowId, Eigen::Index> col;
  for (Eigen::Index k = 0; k < n; ++k) col[flows[static_cast<std::size_t>(k)].id] = k;

  std::map<FlowId, double> fixed;
  for (const auto& f : flows) {
    for (const auto& l : f.path) {
      if (!(topology.capacity(l) > 0.0)) fixed[f.id] = 0.0;
    }
  }

  // Columns: r_0 .. r_{n-1}, t.
  auto base = [&](const std::set<FlowId>& free, double floor_at_least) {
    std::vector<std::pair<Eigen::VectorXd, double>> rows;
    for (const auto& q : cliques) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(n + 1);
      bool any = false;
      for (const auto& s : q.segments) {
        if (fixed.contains(s.flow) && fixed.at(s.flow) == 0.0) continue;
        row(col.at(s.flow)) += 1.0 / topology.capacity(s.link);
        any = true;
      }
      if (any) rows.emplace_back(row, budget);
    }
    for (const auto& f : flows) {
      const Eigen::Index k = col.at(f.id);
      if (auto it = fixed.find(f.id); it != fixed.end()) {
        Eigen::VectorXd up = Eigen::VectorXd::Zero(n + 1), down = Eigen::VectorXd::Zero(n + 1);
        up(k) = 1.0;
        down(k) = -1.0;
        rows.emplace_back(up, it->second);
        rows.emplace_back(down, -it->second * (1.0 - 1e-12));
        continue;
      }
      if (std::isfinite(f.demand_mbps)) {
        Eigen::VectorXd row = Eigen::VectorXd::Zero(n + 1);
        row(k) = 1.0;
        rows.emplace_back(row, f.demand_mbps);
      }
      if (free.contains(f.id)) {
        Eigen::VectorXd row = Eigen::VectorXd::Zero(n + 1);
        row(k) = -1.0;
        row(n) = 1.0;
        rows.emplace_back(row, 0.0);
      }
    }
    if (floor_at_least > 0.0) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(n + 1);
      row(n) = -1.0;
      rows.emplace_back(row, -floor_at_least);
    }
    lp::Problem<double> p(static_cast<Eigen::Index>(rows.size()), n + 1);
    for (Eigen::Index i = 0; i < p.A.rows(); ++i) {
      p.A.row(i) = rows[static_cast<std::size_t>(i)].first.transpose();
      p.b(i) = rows[static_cast<std::size_t>(i)].second;
    }
    return p;
  };

  while (fixed.size() < flows.size()) {
    std::set<FlowId> free;
    for (const auto& f : flows) {
      if (!fixed.contains(f.id)) free.insert(f.id);
    }
    auto p = base(free, 0.0);
    p.c(n) = 1.0;
    const auto floor = lp::solve(p);
    if (floor.status != lp::Status::optimal) throw std::runtime_error("oracle floor LP failed");
    const double t = floor.objective;

    std::size_t before = fixed.size();
    for (FlowId k : free) {
      auto q = base(free, t * (1.0 - 1e-9));
      q.c(col.at(k)) = 1.0;
      const auto best = lp::solve(q);
      if (best.status != lp::Status::optimal) throw std::runtime_error("oracle probe LP failed");
      if (best.objective <= t * (1.0 + 1e-7) + 1e-9) fixed[k] = t;
    }
    if (fixed.size() == before) throw std::runtime_error("oracle made no progress");
  }
  return fixed;
}

}  // namespace mmfair::testing
