// Command-line harness: run experiments, compare configurations, sweep seeds,
// audit a trace against its summary, and emit plot-ready CSV files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hivemind/config.hpp"
#include "hivemind/engine.hpp"
#include "hivemind/simulation.hpp"
#include "hivemind/summary.hpp"
#include "hivemind/trace.hpp"

namespace fs = std::filesystem;
using namespace hive;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitIncomplete = 2;

struct CommonOpts {
  std::string config_path;
  std::string scenario;
  std::string platform;
  std::int64_t seed = -1;
  std::vector<std::string> sets;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool config_required = true) {
  auto* c = cmd->add_option("--config", o.config_path, "Experiment config JSON");
  if (config_required) c->required();
  cmd->add_option("--scenario", o.scenario, "items|people (overrides the config)");
  cmd->add_option("--platform", o.platform, "centralized|decentralized|hivemind");
  cmd->add_option("--seed", o.seed, "Master seed (overrides the config)");
  cmd->add_option("--set", o.sets, "Dotted-path override, e.g. cluster.keep_alive_ms=0");
  cmd->add_option("--out", o.out_dir, "Output directory for artifacts");
}

std::vector<std::string> overrides_of(const CommonOpts& o) {
  std::vector<std::string> ov;
  if (!o.scenario.empty()) ov.push_back("scenario=" + o.scenario);
  if (!o.platform.empty()) ov.push_back("platform=" + o.platform);
  if (o.seed >= 0) ov.push_back("seed=" + std::to_string(o.seed));
  ov.insert(ov.end(), o.sets.begin(), o.sets.end());
  return ov;
}

LoadedConfig load(const CommonOpts& o) {
  LoadedConfig lc = load_config_file(o.config_path, overrides_of(o));
  for (const std::string& w : lc.warnings) std::cerr << "warning: " << w << "\n";
  if (!o.out_dir.empty()) lc.config.out_dir = o.out_dir;
  return lc;
}

void write_file(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw SimError("cannot write " + p.string());
  out << content;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw SimError("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_summary_line(const RunSummary& s) {
  std::printf("%-13s %-13s seed=%-4llu %s t=%.1fs  found=%d/%d dup=%d fp=%d  "
              "battery=%.1f%%  $%.4f\n",
              s.scenario.c_str(), s.platform.c_str(),
              static_cast<unsigned long long>(s.seed),
              s.complete ? "complete " : (s.scenario_failed ? "FAILED   " : "incomplete"),
              s.complete ? s.completion_s : s.mission_end_s, s.unique_detections,
              s.target_count, s.duplicates, s.confirmed_false_positives,
              s.mean_final_battery_pct, s.cost.total());
}

int write_artifacts(const ExperimentConfig& cfg, const RunResult& result) {
  if (cfg.out_dir.empty()) return result.exit_code();
  for (const auto& m : result.missions) {
    fs::path dir = fs::path(cfg.out_dir) / m.run_id;
    write_file(dir / "trace.csv", m.trace_csv);
    write_file(dir / "summary.json", summary_to_json(m.summary));
    write_file(dir / "config.json", config_to_json(cfg));
  }
  return result.exit_code();
}

int cmd_simulate(const CommonOpts& o) {
  LoadedConfig lc = load(o);
  RunResult result = run_experiment(lc.config);
  for (const auto& m : result.missions) {
    if (result.missions.size() > 1) std::printf("mission %d/%zu: ", m.summary.mission,
                                                result.missions.size());
    print_summary_line(m.summary);
  }
  std::cout << summary_to_json(result.last().summary);
  return write_artifacts(lc.config, result);
}

int cmd_compare(const std::vector<std::string>& configs, const CommonOpts& o) {
  int worst = kExitOk;
  std::printf("%-40s %-12s %10s %9s %7s %9s %10s\n", "config", "status", "time_s",
              "found", "fp", "battery%", "cost_usd");
  for (const std::string& path : configs) {
    CommonOpts each = o;
    each.config_path = path;
    LoadedConfig lc = load(each);
    RunResult result = run_experiment(lc.config);
    const RunSummary& s = result.last().summary;
    std::printf("%-40s %-12s %10.1f %5d/%-3d %7d %9.1f %10.4f\n",
                fs::path(path).filename().string().c_str(),
                s.complete ? "complete" : (s.scenario_failed ? "failed" : "incomplete"),
                s.complete ? s.completion_s : s.mission_end_s, s.unique_detections,
                s.target_count, s.confirmed_false_positives, s.mean_final_battery_pct,
                s.cost.total());
    if (!o.out_dir.empty()) {
      ExperimentConfig cfg = lc.config;
      cfg.out_dir = (fs::path(o.out_dir) / fs::path(path).stem()).string();
      write_artifacts(cfg, result);
    }
    worst = std::max(worst, result.exit_code());
  }
  return worst;
}

int cmd_sweep(const CommonOpts& o, int replicas) {
  std::vector<double> completions;
  std::string csv = "seed,complete,completion_s,unique,duplicates,false_positives,"
                    "mean_battery_pct,bytes_total,cost_usd\n";
  int worst = kExitOk;
  for (int seed = 1; seed <= replicas; ++seed) {
    CommonOpts each = o;
    each.seed = seed;
    each.out_dir.clear();  // per-seed artifacts not written; the CSV is the output
    LoadedConfig lc = load(each);
    RunResult result = run_experiment(lc.config);
    const RunSummary& s = result.last().summary;
    if (s.complete) completions.push_back(s.completion_s);
    worst = std::max(worst, result.exit_code());
    std::ostringstream row;
    row << seed << ',' << (s.complete ? 1 : 0) << ','
        << format_fixed(s.complete ? s.completion_s : -1.0, 3) << ',' << s.unique_detections
        << ',' << s.duplicates << ',' << s.confirmed_false_positives << ','
        << format_fixed(s.mean_final_battery_pct, 3) << ',' << s.bytes_total << ','
        << format_fixed(s.cost.total(), 6) << '\n';
    csv += row.str();
    std::printf("seed %3d: %s %.1fs found=%d/%d\n", seed,
                s.complete ? "complete" : "INCOMPLETE",
                s.complete ? s.completion_s : s.mission_end_s, s.unique_detections,
                s.target_count);
  }
  if (!completions.empty()) {
    double mean = 0.0;
    for (double c : completions) mean += c;
    mean /= static_cast<double>(completions.size());
    double var = 0.0;
    for (double c : completions) var += (c - mean) * (c - mean);
    double sd = completions.size() > 1
                    ? std::sqrt(var / static_cast<double>(completions.size() - 1))
                    : 0.0;
    std::printf("completed %zu/%d  mean=%.2fs sd=%.2fs p50=%.2fs p90=%.2fs p99=%.2fs\n",
                completions.size(), replicas, mean, sd,
                nearest_rank_percentile(completions, 50.0),
                nearest_rank_percentile(completions, 90.0),
                nearest_rank_percentile(completions, 99.0));
  }
  if (!o.out_dir.empty()) write_file(fs::path(o.out_dir) / "sweep.csv", csv);
  return worst;
}

// Structural invariants checked on top of the byte-identical recompute.
std::vector<std::string> structural_audit(const ExperimentConfig& cfg,
                                          const std::vector<TraceRow>& rows) {
  std::vector<std::string> problems;
  const RunSummary s = summarize_trace(cfg, rows, 1, 1);

  if (s.photos_taken != s.photos_delivered + s.photos_stored + s.photos_lost) {
    problems.push_back("photo conservation violated: taken != delivered + stored + lost");
  }

  // Exactly one completed function per resolved (job, slot); superseded twins
  // never carry a result.
  std::map<std::string, int> slot_completions;
  SimTime prev_t = 0;
  for (const auto& r : rows) {
    if (r.t < prev_t) problems.push_back("rows not time-ordered at t=" + std::to_string(r.t));
    prev_t = r.t;
    if (r.event == "fn_complete") {
      std::string job, slot;
      detail_field(r.detail, "job", job);
      detail_field(r.detail, "slot", slot);
      if (++slot_completions[job + ":" + slot] > 1) {
        problems.push_back("slot " + job + ":" + slot + " completed more than once");
      }
      if (r.latency_ms < 0) problems.push_back("completed function without a run interval");
      if (from_ms(r.latency_ms) > r.t) problems.push_back("function ends before it starts");
    }
    if (r.event == "transfer" && r.latency_ms < to_ms(from_ms(cfg.network.channel.propagation_ms))) {
      problems.push_back("transfer faster than propagation delay");
    }
  }
  return problems;
}

int cmd_audit(const std::string& dir) {
  std::string config_json = read_file(fs::path(dir) / "config.json");
  std::string trace_csv = read_file(fs::path(dir) / "trace.csv");
  std::string summary_json = read_file(fs::path(dir) / "summary.json");

  LoadedConfig lc = load_config_json(config_json);
  std::string run_id;
  std::vector<TraceRow> rows = parse_trace_csv(trace_csv, &run_id);

  // Mission index is cosmetic; recover it from the stored summary.
  int mission = 1, missions_total = 1;
  {
    auto grab = [&](const std::string& key, int& out) {
      std::size_t p = summary_json.find("\"" + key + "\"");
      if (p != std::string::npos) out = std::atoi(summary_json.c_str() + summary_json.find(':', p) + 1);
    };
    grab("mission", mission);
    grab("missions_total", missions_total);
  }

  RunSummary recomputed = summarize_trace(lc.config, rows, mission, missions_total);
  std::string recomputed_json = summary_to_json(recomputed);

  int rc = kExitOk;
  if (recomputed_json != summary_json) {
    std::cout << "MISMATCH: summary recomputed from the trace differs from summary.json\n";
    std::cout << "--- recomputed ---\n" << recomputed_json;
    rc = kExitError;
  } else {
    std::cout << "summary.json matches the trace recompute byte-for-byte\n";
  }
  std::vector<std::string> problems = structural_audit(lc.config, rows);
  for (const std::string& p : problems) std::cout << "INVARIANT: " << p << "\n";
  if (!problems.empty()) rc = kExitError;
  if (rc == kExitOk) std::cout << "audit passed: " << run_id << " (" << rows.size() << " rows)\n";
  return rc;
}

int cmd_plotdata(const CommonOpts& o, int replicas) {
  if (o.out_dir.empty()) throw SimError("plotdata requires --out");
  LoadedConfig lc = load(o);
  const ExperimentConfig& cfg = lc.config;
  RunResult result = run_experiment(cfg);
  const MissionArtifacts& art = result.last();
  std::vector<TraceRow> rows = parse_trace_csv(art.trace_csv);
  fs::path dir(o.out_dir);

  {  // Per-job end-to-end latency scatter.
    std::string csv = "t_s,kind,latency_ms,sched_ms\n";
    for (const auto& r : rows) {
      if (r.event != "job_complete") continue;
      csv += format_fixed(to_s(r.t), 3) + "," + r.task_type + "," + format_ms(r.latency_ms) +
             "," + format_ms(detail_number(r.detail, "sched_ms")) + "\n";
    }
    write_file(dir / "task_latency.csv", csv);
  }

  {  // Battery traces, one column per device.
    std::map<SimTime, std::map<int, double>> by_t;
    for (const auto& r : rows) {
      if (r.event != "battery") continue;
      int d = std::atoi(r.actor.c_str() + r.actor.rfind('-') + 1);
      by_t[r.t][d] = r.battery_pct;
    }
    std::string csv = "t_s";
    for (int d = 0; d < cfg.devices.count; ++d) csv += ",drone_" + std::to_string(d);
    csv += "\n";
    std::vector<double> last(static_cast<std::size_t>(cfg.devices.count), 100.0);
    for (const auto& [t, m] : by_t) {
      for (const auto& [d, pct] : m) last[static_cast<std::size_t>(d)] = pct;
      csv += format_fixed(to_s(t), 3);
      for (double v : last) csv += "," + format_fixed(v, 3);
      csv += "\n";
    }
    write_file(dir / "battery.csv", csv);
  }

  {  // Channel utilization and cloud occupancy per one-second window.
    SimTime window = from_s(cfg.network.channel.utilization_window_s);
    SimTime prop = from_ms(cfg.network.channel.propagation_ms);
    std::map<SimTime, double> bits, cpu_us;
    for (const auto& r : rows) {
      if (r.event == "transfer") {
        bits[(r.t - prop) / window] += 8.0 * static_cast<double>(r.bytes);
      } else if ((r.event == "fn_complete" || r.event == "fn_superseded") && r.latency_ms >= 0) {
        for (SimTime t = r.t - from_ms(r.latency_ms); t < r.t;) {
          SimTime w = t / window;
          SimTime upto = std::min(r.t, (w + 1) * window);
          cpu_us[w] += static_cast<double>(upto - t);
          t = upto;
        }
      }
    }
    SimTime wmax = 0;
    for (const auto& [w, v] : bits) wmax = std::max(wmax, w);
    for (const auto& [w, v] : cpu_us) wmax = std::max(wmax, w);
    std::string csv = "t_s,utilization,active_cpus\n";
    double cap_bits = cfg.network.channel.capacity_bps * cfg.network.channel.utilization_window_s;
    for (SimTime w = 0; w <= wmax; ++w) {
      double u = bits.count(w) ? bits[w] / cap_bits : 0.0;
      double c = cpu_us.count(w) ? cpu_us[w] / static_cast<double>(window) : 0.0;
      csv += format_fixed(to_s(w * window), 3) + "," + format_fixed(u, 6) + "," +
             format_fixed(c, 3) + "\n";
    }
    write_file(dir / "bandwidth.csv", csv);
  }

  {  // Stage latency percentiles (communication / computation / management).
    const RunSummary& s = art.summary;
    auto line = [](const std::string& name, const Percentiles& p) {
      return name + "," + format_ms(p.p50) + "," + format_ms(p.p90) + "," + format_ms(p.p99) +
             "," + std::to_string(p.samples) + "\n";
    };
    std::string csv = "stage,p50_ms,p90_ms,p99_ms,samples\n";
    csv += line("communication", s.communication);
    csv += line("computation", s.computation);
    csv += line("management", s.management);
    write_file(dir / "latency_breakdown.csv", csv);
  }

  {  // Completion-time spread across seeds.
    std::string csv = "seed,complete,completion_s\n";
    for (int seed = 1; seed <= replicas; ++seed) {
      ExperimentConfig c = cfg;
      c.seed = static_cast<std::uint64_t>(seed);
      RunResult rr = run_experiment(c);
      const RunSummary& s = rr.last().summary;
      csv += std::to_string(seed) + "," + (s.complete ? "1" : "0") + "," +
             format_fixed(s.complete ? s.completion_s : -1.0, 3) + "\n";
    }
    write_file(dir / "predictability.csv", csv);
  }

  write_file(dir / "trace.csv", art.trace_csv);
  write_file(dir / "summary.json", summary_to_json(art.summary));
  write_file(dir / "config.json", config_to_json(cfg));
  std::cout << "plot data written to " << dir.string() << "\n";
  return result.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Swarm survey simulator harness"};
  app.require_subcommand(1);

  CommonOpts sim_o, cmp_o, swp_o, plot_o;
  std::vector<std::string> cmp_configs;
  std::string audit_dir;
  int replicas = 10;
  int plot_replicas = 30;

  auto* sim = app.add_subcommand("simulate", "Run one experiment and write artifacts");
  add_common(sim, sim_o);

  auto* cmp = app.add_subcommand("compare", "Run several configs under the same options");
  cmp->add_option("--config", cmp_configs, "Config files to compare")->required();
  cmp->add_option("--scenario", cmp_o.scenario, "items|people");
  cmp->add_option("--seed", cmp_o.seed, "Master seed");
  cmp->add_option("--set", cmp_o.sets, "Dotted-path override");
  cmp->add_option("--out", cmp_o.out_dir, "Artifact directory");

  auto* swp = app.add_subcommand("sweep", "Run seeds 1..N and report completion statistics");
  add_common(swp, swp_o);
  swp->add_option("--replicas", replicas, "Number of seeds");

  auto* aud = app.add_subcommand("audit", "Recompute a summary from its trace and compare");
  aud->add_option("dir", audit_dir, "Directory with trace.csv, summary.json, config.json")
      ->required();

  auto* plt = app.add_subcommand("plotdata", "Emit per-figure CSV files");
  add_common(plt, plot_o);
  plt->add_option("--replicas", plot_replicas, "Seeds for the spread figure");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(sim_o);
    if (cmp->parsed()) return cmd_compare(cmp_configs, cmp_o);
    if (swp->parsed()) return cmd_sweep(swp_o, replicas);
    if (aud->parsed()) return cmd_audit(audit_dir);
    if (plt->parsed()) return cmd_plotdata(plot_o, plot_replicas);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
