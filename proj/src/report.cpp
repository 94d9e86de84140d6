#include "mmfair/report.hpp"

#include <cmath>
#include <ostream>

namespace mmfair {

namespace {

std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string path_text(const Flow& flow) {
  std::string s;
  for (NodeId n : nodes_on_path(flow.path)) {
    if (!s.empty()) s += '-';
    s += std::to_string(n);
  }
  return s;
}

}  // namespace

void write_alloc_csv(std::ostream& out, const Topology& topology, const AllocationVector& alloc) {
  out << "flow,demand_mbps,rate_mbps,blocked,path\n";
  for (const auto& flow : topology.flows) {
    out << flow.id << ',' << number(flow.demand_mbps) << ',' << number(alloc.rate(flow.id)) << ','
        << (alloc.blocked.contains(flow.id) ? 1 : 0) << ',' << path_text(flow) << '\n';
  }
}

void write_segments_csv(std::ostream& out, const AllocationVector& alloc) {
  out << "flow,src,dst,rate_mbps,airtime_fraction\n";
  for (const auto& [seg, airtime] : alloc.airtimes) {
    out << seg.flow << ',' << seg.link.src << ',' << seg.link.dst << ',' << number(alloc.rate(seg.flow)) << ','
        << number(airtime) << '\n';
  }
}

void write_schedule_csv(std::ostream& out, const Schedule& schedule) {
  out << "flow,src,dst,start_us,duration_us,end_us\n";
  for (const auto& slot : schedule.slots) {
    out << slot.segment.flow << ',' << slot.segment.link.src << ',' << slot.segment.link.dst << ','
        << slot.start_us << ',' << slot.duration_us << ',' << slot.end_us() << '\n';
  }
}

void write_reports_csv(std::ostream& out, const std::vector<BiReport>& reports) {
  out << "bi,flow,demand_mbps,allocated_mbps,delivered_mbps,mean_delay_us,max_delay_us,"
         "generated_pkts,delivered_pkts,drops,queued_pkts\n";
  for (const auto& r : reports) {
    for (const auto& f : r.flows) {
      out << r.bi << ',' << f.flow << ',' << number(f.demand_mbps) << ',' << number(f.allocated_mbps) << ','
          << number(f.delivered_mbps) << ',' << number(f.mean_delay_us) << ',' << number(f.max_delay_us) << ','
          << f.generated << ',' << f.delivered << ',' << f.dropped << ',' << f.queued << '\n';
    }
  }
}

void write_clique_csv(std::ostream& out, const std::vector<BiReport>& reports) {
  out << "bi,clique,airtime_fraction,saturated,segments\n";
  for (const auto& r : reports) {
    for (const auto& c : r.cliques) {
      out << r.bi << ',' << c.id << ',' << number(c.airtime) << ',' << (c.saturated ? 1 : 0) << ',';
      for (std::size_t i = 0; i < c.segments.size(); ++i) {
        if (i > 0) out << ' ';
        out << to_string(c.segments[i]);
      }
      out << '\n';
    }
  }
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << "label,total_mbps,mean_mbps,gini,max_min_measure\n";
  for (const auto& row : rows) {
    const auto& m = row.metrics;
    out << row.label << ',' << number(m.total_throughput) << ',' << number(m.mean_throughput) << ','
        << (m.gini ? number(*m.gini) : "nan") << ',' << number(m.max_min.value) << '\n';
  }
}

void write_metrics_block(std::ostream& out, const MetricsReport& m) {
  out << "total_throughput_mbps = " << number(m.total_throughput) << '\n'
      << "mean_throughput_mbps = " << number(m.mean_throughput) << '\n'
      << "gini = " << (m.gini ? number(*m.gini) : "undefined (all rates zero)") << '\n'
      << "max_min_measure = " << number(m.max_min.value) << (m.max_min.degenerate ? " (zero rate present)" : "")
      << '\n';
}

std::vector<double> mean_delivered(const std::vector<BiReport>& reports, int first_bi) {
  std::vector<double> sums;
  int count = 0;
  for (const auto& r : reports) {
    if (r.bi < first_bi) continue;
    if (sums.empty()) sums.assign(r.flows.size(), 0.0);
    for (std::size_t i = 0; i < r.flows.size() && i < sums.size(); ++i) sums[i] += r.flows[i].delivered_mbps;
    ++count;
  }
  for (double& s : sums) s /= count > 0 ? count : 1;
  return sums;
}

}  // namespace mmfair
