#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "mmfair/allocator.hpp"
#include "mmfair/bench.hpp"
#include "mmfair/conflict.hpp"
#include "mmfair/metrics.hpp"
#include "mmfair/report.hpp"
#include "mmfair/scheduler.hpp"
#include "mmfair/sim.hpp"
#include "mmfair/topology_io.hpp"

namespace fs = std::filesystem;
using namespace mmfair;

namespace {

struct Common {
  std::string topology;
  std::string allocator = "wihaul";
  double epsilon_kbps = 10.0;
  double tau = 0.1;
  std::string freeze = "clique";
  bool ignore_interference = false;
  std::int64_t bi_us = 102400;
  std::int64_t overhead_us = 10240;
  int n_sp = 20;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--topology", c.topology, "Topology JSON file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--allocator", c.allocator, "wihaul | maxthroughput | roundrobin")
      ->check(CLI::IsMember({"wihaul", "maxthroughput", "roundrobin"}))
      ->capture_default_str();
  cmd->add_option("--epsilon-kbps", c.epsilon_kbps, "Progressive filling step")->capture_default_str();
  cmd->add_option("--tau", c.tau, "Airtime share reserved for beam training")->capture_default_str();
  cmd->add_option("--freeze-scope", c.freeze, "Flows frozen on clique saturation: clique | global")
      ->check(CLI::IsMember({"clique", "global"}))
      ->capture_default_str();
  cmd->add_flag("--ignore-interference", c.ignore_interference,
                "Schedule as if declared interference pairs did not exist");
  cmd->add_option("--bi-us", c.bi_us, "Beacon interval")->capture_default_str();
  cmd->add_option("--overhead-us", c.overhead_us, "Overhead at the start of each BI")->capture_default_str();
  cmd->add_option("--n-sp", c.n_sp, "Service periods per segment and BI")->capture_default_str();
}

AllocatorConfig alloc_config(const Common& c) {
  AllocatorConfig cfg;
  cfg.epsilon_kbps = c.epsilon_kbps;
  cfg.tau = c.tau;
  cfg.freeze_scope = c.freeze == "global" ? FreezeScope::global : FreezeScope::clique;
  cfg.validate();
  return cfg;
}

FrameConfig frame_config(const Common& c) {
  FrameConfig f{c.bi_us, c.overhead_us, c.n_sp};
  f.validate();
  return f;
}

Topology load_with_flows(const std::string& file) {
  Topology t = load_topology(file);
  if (t.flows.empty()) throw LoadError(file + ": no flows");
  return t;
}

std::ofstream open_out(const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  return out;
}

std::string fmt(double v, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

int cmd_allocate(const Common& c, const std::string& out_dir, const std::string& run_name,
                 const std::string& conflict_dump) {
  const Topology topo = load_with_flows(c.topology);
  const AllocatorConfig cfg = alloc_config(c);
  const FrameConfig frame = frame_config(c);
  ConflictOptions opts;
  opts.include_interference = !c.ignore_interference;
  const ConflictGraph graph = build_conflict_graph(topo, opts);
  const CliqueSet cliques = enumerate_cliques(graph);
  const AllocationVector alloc = allocate(parse_allocator_kind(c.allocator), topo, cliques, cfg);
  const Hierarchy hierarchy = build_hierarchy(topo, conflict_nodes(topo));
  const Schedule schedule = assign_slots(hierarchy, cliques, alloc, frame);
  const MetricsReport metrics = summarize(alloc.rate_vector());

  write_alloc_csv(std::cout, topo, alloc);
  std::cout << '\n';
  write_metrics_block(std::cout, metrics);

  if (!conflict_dump.empty()) {
    auto out = open_out(conflict_dump);
    write_conflict_dump(out, graph, cliques);
  }
  if (!out_dir.empty()) {
    const fs::path dir = fs::path(out_dir) / (run_name.empty() ? fs::path(c.topology).stem().string() : run_name);
    fs::create_directories(dir);
    {
      auto out = open_out(dir / "alloc.csv");
      write_alloc_csv(out, topo, alloc);
    }
    {
      auto out = open_out(dir / "segments.csv");
      write_segments_csv(out, alloc);
    }
    {
      auto out = open_out(dir / "schedule.csv");
      write_schedule_csv(out, schedule);
    }
    {
      auto out = open_out(dir / "metrics.csv");
      write_metrics_csv(out, {{c.allocator, metrics}});
    }
    auto out = open_out(dir / "summary.txt");
    out << "command = allocate\ntopology = " << c.topology << "\nallocator = " << c.allocator
        << "\nepsilon_kbps = " << c.epsilon_kbps << "\ntau = " << c.tau << "\ncliques = " << cliques.size()
        << "\nschedule_makespan_us = " << schedule.makespan_us()
        << "\nschedule_total_slot_us = " << schedule.total_slot_us() << '\n';
    write_metrics_block(out, metrics);
  }
  return 0;
}

struct SimJob {
  std::string scenario_file;
  std::string name;
};

std::string simulate_one(const Common& c, const Topology& topo, const SimJob& job, std::uint64_t seed,
                         std::int64_t queue_bytes, int duration_bi, const fs::path& out_dir) {
  Scenario scenario;
  if (job.scenario_file.empty()) {
    scenario.duration_bi = duration_bi;
  } else {
    scenario = load_scenario(job.scenario_file, topo);
  }
  SimConfig cfg;
  cfg.allocator = parse_allocator_kind(c.allocator);
  cfg.alloc = alloc_config(c);
  cfg.frame = frame_config(c);
  cfg.conflict.include_interference = !c.ignore_interference;
  cfg.seed = seed;
  cfg.queue_limit_bytes = queue_bytes;

  Simulator sim(topo, cfg);
  std::vector<BiReport> reports;
  auto next = scenario.events.begin();
  for (int b = 0; b < scenario.duration_bi; ++b) {
    std::vector<Event> due;
    for (; next != scenario.events.end() && next->bi == b; ++next) due.push_back(next->event);
    reports.push_back(sim.step(due));
  }

  const fs::path dir = out_dir / job.name;
  fs::create_directories(dir);
  {
    auto out = open_out(dir / "reports.csv");
    write_reports_csv(out, reports);
  }
  {
    auto out = open_out(dir / "cliques.csv");
    write_clique_csv(out, reports);
  }
  {
    auto out = open_out(dir / "alloc.csv");
    write_alloc_csv(out, sim.topology(), sim.allocation());
  }
  {
    auto out = open_out(dir / "segments.csv");
    write_segments_csv(out, sim.allocation());
  }
  {
    auto out = open_out(dir / "schedule.csv");
    write_schedule_csv(out, sim.schedule());
  }
  std::vector<MetricsRow> per_bi;
  for (const auto& r : reports) {
    std::vector<double> rates;
    for (const auto& f : r.flows) rates.push_back(f.delivered_mbps);
    per_bi.push_back({"bi" + std::to_string(r.bi), summarize(rates)});
  }
  // BI 0 carries the pipeline fill-up and is left out of the run summary.
  const int first = scenario.duration_bi > 1 ? 1 : 0;
  const std::vector<double> mean = mean_delivered(reports, first);
  const MetricsReport overall = summarize(mean);
  per_bi.push_back({"mean", overall});
  {
    auto out = open_out(dir / "metrics.csv");
    write_metrics_csv(out, per_bi);
  }

  std::int64_t drops = 0, losses = 0;
  bool conserved = true;
  for (const auto& r : reports) {
    losses += r.interference_losses;
    for (const auto& f : r.flows) {
      drops += f.dropped;
      conserved = conserved && f.total_generated == f.total_delivered + f.queued + f.total_dropped;
    }
  }
  std::ostringstream summary;
  summary << "[run " << job.name << "]\n"
          << "topology = " << c.topology << '\n'
          << "scenario = " << (job.scenario_file.empty() ? "(static)" : job.scenario_file) << '\n'
          << "allocator = " << c.allocator << '\n'
          << "epsilon_kbps = " << c.epsilon_kbps << "\ntau = " << c.tau << "\nbi_us = " << c.bi_us
          << "\noverhead_us = " << c.overhead_us << "\nn_sp = " << c.n_sp << "\nseed = " << seed
          << "\nduration_bi = " << scenario.duration_bi << "\ninterference = "
          << (c.ignore_interference ? "ignored by scheduler" : "scheduled around") << '\n';
  summary << "flow mean delivered_mbps (BI " << first << " onward):";
  for (std::size_t i = 0; i < mean.size(); ++i) {
    summary << ' ' << reports.front().flows[i].flow << '=' << fmt(mean[i]);
  }
  summary << "\ndropped_pkts = " << drops << "\ninterference_losses = " << losses
          << "\nconservation = " << (conserved ? "ok" : "VIOLATED") << '\n';
  write_metrics_block(summary, overall);
  {
    auto out = open_out(dir / "summary.txt");
    out << summary.str();
  }
  return summary.str();
}

int cmd_simulate(const Common& c, const std::vector<std::string>& scenarios, const std::string& out_dir,
                 std::uint64_t seed, int jobs, std::int64_t queue_bytes, int duration_bi,
                 const std::string& run_name) {
  const Topology topo = load_with_flows(c.topology);
  std::vector<SimJob> work;
  for (const auto& s : scenarios) work.push_back({s, fs::path(s).stem().string()});
  if (work.empty()) work.push_back({"", "static"});
  if (!run_name.empty()) {
    if (work.size() != 1) throw std::invalid_argument("--run-name needs exactly one scenario");
    work.front().name = run_name;
  }
  // Load every scenario up front so that a bad file fails before any run.
  for (const auto& w : work) {
    if (!w.scenario_file.empty()) (void)load_scenario(w.scenario_file, topo);
  }

  std::vector<std::string> summaries(work.size());
  std::vector<std::string> errors(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < work.size(); i = next++) {
      try {
        summaries[i] = simulate_one(c, topo, work[i], seed, queue_bytes, duration_bi, out_dir);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(work.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int status = 0;
  for (std::size_t i = 0; i < work.size(); ++i) {
    if (!errors[i].empty()) {
      std::cerr << "mmfair: run " << work[i].name << " failed: " << errors[i] << '\n';
      status = 1;
    } else {
      std::cout << summaries[i] << '\n';
    }
  }
  return status;
}

int cmd_bench(const Common& c, double start, double stop, double step, int reps, const std::string& out_file) {
  const Topology topo = load_with_flows(c.topology);
  const auto points = bench_progressive_filling(topo, demand_sweep(start, stop, step), reps, alloc_config(c));
  std::ostringstream table;
  table << "demand_mbps,mean_ms,ci95_ms,median_ms,iterations,reps\n";
  for (const auto& p : points) {
    table << fmt(p.demand_mbps, 1) << ',' << fmt(p.mean_ms, 4) << ',' << fmt(p.ci95_ms, 4) << ','
          << fmt(p.median_ms, 4) << ',' << p.iterations << ',' << p.reps << '\n';
  }
  std::cout << table.str();
  if (!out_file.empty()) {
    if (fs::path(out_file).has_parent_path()) fs::create_directories(fs::path(out_file).parent_path());
    auto out = open_out(out_file);
    out << table.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max-min fair airtime allocation, scheduling and simulation for mm-wave backhauls"};
  app.require_subcommand(1);

  Common alloc_opts;
  std::string alloc_out, alloc_name, conflict_dump;
  auto* allocate_cmd = app.add_subcommand("allocate", "Allocate rates and build one schedule");
  add_common(allocate_cmd, alloc_opts);
  allocate_cmd->add_option("--out", alloc_out, "Results directory");
  allocate_cmd->add_option("--run-name", alloc_name, "Subdirectory name (default: topology file stem)");
  allocate_cmd->add_option("--dump-conflict", conflict_dump, "Write the conflict graph and cliques here");

  Common sim_opts;
  std::vector<std::string> scenarios;
  std::string sim_out = "results", sim_name;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::int64_t queue_bytes = 10'000'000;
  int duration_bi = 10;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run the packet-level simulation");
  add_common(simulate_cmd, sim_opts);
  simulate_cmd->add_option("--scenario", scenarios, "Scenario JSON (repeatable; none = static run)")
      ->check(CLI::ExistingFile);
  simulate_cmd->add_option("--out", sim_out, "Results directory")->capture_default_str();
  simulate_cmd->add_option("--run-name", sim_name, "Subdirectory name (single scenario only)");
  simulate_cmd->add_option("--seed", seed, "Seed for source phases")->capture_default_str();
  simulate_cmd->add_option("--jobs", jobs, "Scenarios run in parallel")->capture_default_str();
  simulate_cmd->add_option("--queue-bytes", queue_bytes, "Per-queue bound")->capture_default_str();
  simulate_cmd->add_option("--duration-bi", duration_bi, "BIs for a static run")->capture_default_str();

  Common bench_opts;
  double d_start = 100.0, d_stop = 2000.0, d_step = 50.0;
  int reps = 100;
  std::string bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "Time progressive filling over a demand sweep");
  add_common(bench_cmd, bench_opts);
  bench_cmd->add_option("--demand-start", d_start, "First demand (Mbps)")->capture_default_str();
  bench_cmd->add_option("--demand-stop", d_stop, "Last demand (Mbps)")->capture_default_str();
  bench_cmd->add_option("--demand-step", d_step, "Demand increment (Mbps)")->capture_default_str();
  bench_cmd->add_option("--reps", reps, "Repetitions per demand point")->capture_default_str();
  bench_cmd->add_option("--out", bench_out, "Also write the table to this CSV file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*allocate_cmd) return cmd_allocate(alloc_opts, alloc_out, alloc_name, conflict_dump);
    if (*simulate_cmd) {
      return cmd_simulate(sim_opts, scenarios, sim_out, seed, jobs, queue_bytes, duration_bi, sim_name);
    }
    if (*bench_cmd) return cmd_bench(bench_opts, d_start, d_stop, d_step, reps, bench_out);
  } catch (const std::exception& e) {
    std::cerr << "mmfair: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
