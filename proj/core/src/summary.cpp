#include "hivemind/summary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>

#include "hivemind/engine.hpp"
#include "json.hpp"

namespace hive {

double round_ms(double v) { return static_cast<double>(std::llround(v * 1000.0)) / 1000.0; }

bool detail_field(const std::string& detail, const std::string& key, std::string& out) {
  std::size_t pos = 0;
  while (pos < detail.size()) {
    std::size_t end = detail.find(';', pos);
    if (end == std::string::npos) end = detail.size();
    std::size_t eq = detail.find('=', pos);
    if (eq != std::string::npos && eq < end && detail.compare(pos, eq - pos, key) == 0) {
      out = detail.substr(eq + 1, end - eq - 1);
      return true;
    }
    pos = end + 1;
  }
  return false;
}

double detail_number(const std::string& detail, const std::string& key) {
  std::string v;
  if (!detail_field(detail, key, v)) {
    throw SimError("trace detail missing field '" + key + "': " + detail);
  }
  return std::strtod(v.c_str(), nullptr);
}

namespace {

int actor_index(const std::string& actor) {
  std::size_t dash = actor.rfind('-');
  if (dash == std::string::npos) return -1;
  return std::atoi(actor.c_str() + dash + 1);
}

Percentiles percentiles_of(std::vector<double> samples) {
  Percentiles p;
  p.samples = static_cast<int>(samples.size());
  if (samples.empty()) return p;
  p.p50 = nearest_rank_percentile(samples, 50.0);
  p.p90 = nearest_rank_percentile(samples, 90.0);
  p.p99 = nearest_rank_percentile(samples, 99.0);
  return p;
}

}  // namespace

RunSummary summarize_trace(const ExperimentConfig& cfg, const std::vector<TraceRow>& rows,
                           int mission, int missions_total) {
  RunSummary s;
  s.scenario = scenario_name(cfg.scenario);
  s.platform = platform_name(cfg.platform);
  s.seed = cfg.seed;
  s.mission = mission;
  s.missions_total = missions_total;
  s.target_count =
      cfg.scenario == Scenario::items ? cfg.world.item_count : cfg.world.person_count;
  s.final_battery_pct.assign(static_cast<std::size_t>(cfg.devices.count), 100.0);

  const SimTime window_us = from_s(cfg.network.channel.utilization_window_s);
  const SimTime prop_us = from_ms(cfg.network.channel.propagation_ms);
  const double cap_bits_per_window =
      cfg.network.channel.capacity_bps * cfg.network.channel.utilization_window_s;

  std::map<SimTime, double> window_bits;         // by window start index
  std::vector<std::pair<SimTime, std::int64_t>> deliveries;  // (service end, bytes)
  std::vector<double> comm_ms, comp_ms, mgmt_ms;
  std::vector<std::pair<SimTime, SimTime>> fn_runs;  // (start, end)
  std::set<std::string> containers;
  SimTime first_photo = -1, last_photo = -1;
  SimTime completion_us = -1;
  std::vector<SimTime> last_battery_t(static_cast<std::size_t>(cfg.devices.count), -1);

  for (const auto& r : rows) {
    s.mission_end_s = std::max(s.mission_end_s, to_s(r.t));
    if (r.event == "transfer") {
      s.bytes_total += r.bytes;
      SimTime service_end = r.t - prop_us;
      deliveries.emplace_back(service_end, r.bytes);
      window_bits[service_end / window_us] += 8.0 * static_cast<double>(r.bytes);
      if (r.task_type == "photo") comm_ms.push_back(r.latency_ms);
    } else if (r.event == "photo") {
      ++s.photos_taken;
      if (first_photo < 0) first_photo = r.t;
      first_photo = std::min(first_photo, r.t);
      last_photo = std::max(last_photo, r.t);
      if (r.task_type == "delivered") {
        ++s.photos_delivered;
        s.cost_inputs.stored_gb_months += static_cast<double>(r.bytes) / 1e9;
      } else if (r.task_type == "stored") {
        ++s.photos_stored;
      } else if (r.task_type == "lost") {
        ++s.photos_lost;
      }
    } else if (r.event == "fn_complete" || r.event == "fn_superseded") {
      if (r.event == "fn_superseded") ++s.superseded;
      if (r.latency_ms >= 0.0) {
        ++s.fn_executions;
        SimTime dur = from_ms(r.latency_ms);
        fn_runs.emplace_back(r.t - dur, r.t);
        s.cost_inputs.compute_gb_s += r.latency_ms / 1000.0;
        std::string c;
        if (detail_field(r.detail, "container", c)) containers.insert(c);
        std::string cold;
        if (detail_field(r.detail, "cold", cold) && cold == "0") ++s.container_reuses;
      }
      std::string flag;
      if (detail_field(r.detail, "respawn", flag) && flag == "1") ++s.respawns;
      if (detail_field(r.detail, "probation", flag) && flag == "1") ++s.probations;
    } else if (r.event == "job_complete") {
      ++s.jobs_submitted;
      comp_ms.push_back(r.latency_ms);
      mgmt_ms.push_back(detail_number(r.detail, "sched_ms"));
    } else if (r.event == "battery") {
      int d = actor_index(r.actor);
      if (d >= 0 && d < cfg.devices.count && r.t >= last_battery_t[static_cast<std::size_t>(d)]) {
        last_battery_t[static_cast<std::size_t>(d)] = r.t;
        s.final_battery_pct[static_cast<std::size_t>(d)] = r.battery_pct;
      }
    } else if (r.event == "registration") {
      if (r.task_type == "unique") ++s.unique_detections;
      else if (r.task_type == "duplicate") ++s.duplicates;
      else if (r.task_type == "false_positive") ++s.confirmed_false_positives;
      else if (r.task_type == "discarded") ++s.discarded_no_face;
    } else if (r.event == "crash") {
      ++s.crashes;
    } else if (r.event == "battery_dead") {
      ++s.battery_deaths;
      s.last_battery_death_s = std::max(s.last_battery_death_s, to_s(r.t));
    } else if (r.actor == "controller") {
      if (r.event == "scenario_complete") completion_us = r.t;
      else if (r.event == "scenario_failed") s.scenario_failed = true;
      else if (r.event == "failure_declared") ++s.failures_declared;
      else if (r.event == "revert") ++s.reverts;
      else if (r.event == "revert_refused") ++s.revert_refusals;
      else if (r.event == "rebalance") ++s.rebalances;
      else if (r.event == "retrain") ++s.retrain_rounds;
    }
  }

  s.complete = completion_us >= 0 && !s.scenario_failed;
  if (s.complete) s.completion_s = to_s(completion_us);
  s.false_negatives = std::max(0, s.target_count - s.unique_detections);

  double mean_b = 0.0;
  for (double b : s.final_battery_pct) mean_b += b;
  s.mean_final_battery_pct =
      cfg.devices.count > 0 ? mean_b / static_cast<double>(cfg.devices.count) : 0.0;

  for (const auto& [w, bits] : window_bits) {
    s.peak_utilization = std::max(s.peak_utilization, bits / cap_bits_per_window);
  }
  if (first_photo >= 0 && last_photo > first_photo) {
    double bits = 0.0;
    for (const auto& [end, bytes] : deliveries) {
      if (end >= first_photo && end < last_photo) bits += 8.0 * static_cast<double>(bytes);
    }
    double span_s = to_s(last_photo - first_photo);
    s.survey_utilization = bits / (cfg.network.channel.capacity_bps * span_s);
  }

  SimTime horizon = s.complete ? completion_us : from_s(s.mission_end_s);
  if (horizon > 0 && !fn_runs.empty()) {
    double busy = 0.0;
    std::map<SimTime, double> cpu_windows;
    for (const auto& [start, end] : fn_runs) {
      busy += static_cast<double>(end - start);
      for (SimTime t = start; t < end;) {
        SimTime w = t / window_us;
        SimTime upto = std::min(end, (w + 1) * window_us);
        cpu_windows[w] += static_cast<double>(upto - t);
        t = upto;
      }
    }
    s.mean_active_cpus = busy / static_cast<double>(horizon);
    for (const auto& [w, us] : cpu_windows) {
      s.peak_active_cpus = std::max(s.peak_active_cpus, us / static_cast<double>(window_us));
    }
  }

  s.unique_containers = static_cast<std::int64_t>(containers.size());
  s.communication = percentiles_of(std::move(comm_ms));
  s.computation = percentiles_of(std::move(comp_ms));
  s.management = percentiles_of(std::move(mgmt_ms));

  s.cost_inputs.invocations = static_cast<std::uint64_t>(s.fn_executions);
  s.cost_inputs.write_ops = static_cast<std::uint64_t>(s.photos_delivered);
  s.cost_inputs.read_ops = static_cast<std::uint64_t>(s.fn_executions);
  s.cost = estimate_cost(s.cost_inputs, cfg.pricing);
  return s;
}

std::string summary_to_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["scenario"] = s.scenario;
  j["platform"] = s.platform;
  j["seed"] = s.seed;
  j["mission"] = s.mission;
  j["missions_total"] = s.missions_total;
  j["complete"] = s.complete;
  j["scenario_failed"] = s.scenario_failed;
  j["completion_s"] = s.completion_s;
  j["mission_end_s"] = s.mission_end_s;
  nlohmann::ordered_json det;
  det["target_count"] = s.target_count;
  det["unique"] = s.unique_detections;
  det["duplicates"] = s.duplicates;
  det["confirmed_false_positives"] = s.confirmed_false_positives;
  det["discarded_no_face"] = s.discarded_no_face;
  det["false_negatives"] = s.false_negatives;
  j["detections"] = det;
  nlohmann::ordered_json ph;
  ph["taken"] = s.photos_taken;
  ph["delivered"] = s.photos_delivered;
  ph["stored"] = s.photos_stored;
  ph["lost"] = s.photos_lost;
  j["photos"] = ph;
  nlohmann::ordered_json en;
  en["final_battery_pct"] = s.final_battery_pct;
  en["mean_final_battery_pct"] = s.mean_final_battery_pct;
  en["last_battery_death_s"] = s.last_battery_death_s;
  j["energy"] = en;
  nlohmann::ordered_json fa;
  fa["crashes"] = s.crashes;
  fa["battery_deaths"] = s.battery_deaths;
  fa["failures_declared"] = s.failures_declared;
  fa["reverts"] = s.reverts;
  fa["revert_refusals"] = s.revert_refusals;
  fa["rebalances"] = s.rebalances;
  fa["retrain_rounds"] = s.retrain_rounds;
  j["control"] = fa;
  nlohmann::ordered_json net;
  net["bytes_total"] = s.bytes_total;
  net["peak_utilization"] = s.peak_utilization;
  net["survey_utilization"] = s.survey_utilization;
  j["network"] = net;
  nlohmann::ordered_json cl;
  cl["jobs"] = s.jobs_submitted;
  cl["fn_executions"] = s.fn_executions;
  cl["unique_containers"] = s.unique_containers;
  cl["container_reuses"] = s.container_reuses;
  cl["respawns"] = s.respawns;
  cl["superseded"] = s.superseded;
  cl["probations"] = s.probations;
  cl["mean_active_cpus"] = s.mean_active_cpus;
  cl["peak_active_cpus"] = s.peak_active_cpus;
  j["cluster"] = cl;
  auto pct = [](const Percentiles& p) {
    nlohmann::ordered_json o;
    o["p50_ms"] = p.p50;
    o["p90_ms"] = p.p90;
    o["p99_ms"] = p.p99;
    o["samples"] = p.samples;
    return o;
  };
  nlohmann::ordered_json lat;
  lat["communication"] = pct(s.communication);
  lat["computation"] = pct(s.computation);
  lat["management"] = pct(s.management);
  j["latency"] = lat;
  nlohmann::ordered_json co;
  co["compute_gb_s"] = s.cost_inputs.compute_gb_s;
  co["invocations"] = s.cost_inputs.invocations;
  co["stored_gb_months"] = s.cost_inputs.stored_gb_months;
  co["write_ops"] = s.cost_inputs.write_ops;
  co["read_ops"] = s.cost_inputs.read_ops;
  co["compute_usd"] = s.cost.compute_usd;
  co["storage_usd"] = s.cost.storage_usd;
  co["requests_usd"] = s.cost.requests_usd;
  co["total_usd"] = s.cost.total();
  j["cost"] = co;
  return j.dump(2) + "\n";
}

std::vector<TraceRow> parse_trace_csv(const std::string& csv, std::string* run_id) {
  std::vector<TraceRow> rows;
  std::size_t pos = 0;
  bool header = true;
  while (pos < csv.size()) {
    std::size_t eol = csv.find('\n', pos);
    if (eol == std::string::npos) eol = csv.size();
    std::string line = csv.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("run_id,", 0) != 0) throw SimError("trace csv: unexpected header");
      continue;
    }
    // First eight fields are comma-free by construction; the detail column is
    // everything after the eighth comma.
    std::vector<std::string> f;
    std::size_t p = 0;
    for (int i = 0; i < 8; ++i) {
      std::size_t c = line.find(',', p);
      if (c == std::string::npos) throw SimError("trace csv: short row: " + line);
      f.push_back(line.substr(p, c - p));
      p = c + 1;
    }
    f.push_back(line.substr(p));
    if (run_id) *run_id = f[0];
    TraceRow r;
    r.t = static_cast<SimTime>(std::llround(std::strtod(f[1].c_str(), nullptr) * 1000.0));
    r.actor = f[2];
    r.event = f[3];
    r.task_type = f[4];
    r.latency_ms = f[5].empty() ? -1.0 : std::strtod(f[5].c_str(), nullptr);
    r.bytes = f[6].empty() ? -1 : std::strtoll(f[6].c_str(), nullptr, 10);
    r.battery_pct = f[7].empty() ? -1.0 : std::strtod(f[7].c_str(), nullptr);
    r.detail = f[8];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace hive
