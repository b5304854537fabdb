#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hivemind/config.hpp"
#include "hivemind/cost.hpp"
#include "hivemind/trace.hpp"

namespace hive {

struct Percentiles {
  double p50 = 0.0;
  double p90 = 0.0;
  double p99 = 0.0;
  int samples = 0;
};

// Per-mission result. Every field is recomputable from (resolved config,
// trace rows): the audit tool re-runs summarize_trace on the parsed CSV and
// requires byte-identical JSON.
struct RunSummary {
  std::string scenario;
  std::string platform;
  std::uint64_t seed = 0;
  int mission = 1;        // 1-based index when learning spans missions
  int missions_total = 1;

  bool complete = false;
  bool scenario_failed = false;
  double completion_s = -1.0;     // objective reached (all areas surveyed,
                                  // nothing outstanding); -1 when failed
  double mission_end_s = 0.0;     // last event in the trace

  // Detection outcomes.
  int target_count = 0;
  int unique_detections = 0;
  int duplicates = 0;
  int confirmed_false_positives = 0;
  int discarded_no_face = 0;
  int false_negatives = 0;

  // Photo conservation: taken == delivered + stored + lost at mission end.
  std::int64_t photos_taken = 0;
  std::int64_t photos_delivered = 0;
  std::int64_t photos_stored = 0;
  std::int64_t photos_lost = 0;

  // Energy.
  std::vector<double> final_battery_pct;  // by device id
  double mean_final_battery_pct = 0.0;
  double last_battery_death_s = -1.0;

  // Faults and control actions.
  int crashes = 0;
  int battery_deaths = 0;
  int failures_declared = 0;
  int reverts = 0;
  int revert_refusals = 0;
  int rebalances = 0;
  int retrain_rounds = 0;

  // Network.
  std::int64_t bytes_total = 0;
  double peak_utilization = 0.0;
  double survey_utilization = 0.0;  // mean over [first photo, last photo]

  // Cloud execution.
  std::int64_t jobs_submitted = 0;
  std::int64_t fn_executions = 0;
  std::int64_t unique_containers = 0;
  std::int64_t container_reuses = 0;
  std::int64_t respawns = 0;
  std::int64_t superseded = 0;
  std::int64_t probations = 0;
  double mean_active_cpus = 0.0;
  double peak_active_cpus = 0.0;

  // End-to-end latency decomposition (ms).
  Percentiles communication;  // photo upload: capture enqueue -> delivery
  Percentiles computation;    // cloud job: submit -> all slots resolved
  Percentiles management;     // scheduler decision latency

  CostInputs cost_inputs;
  CostBreakdown cost;

  int exit_code() const { return complete ? 0 : 2; }
};

// The only implementation of summary math. `rows` may come straight from the
// run or from parse_trace_csv; both must yield the same summary.
RunSummary summarize_trace(const ExperimentConfig& cfg, const std::vector<TraceRow>& rows,
                           int mission, int missions_total);

std::string summary_to_json(const RunSummary& s);

// Inverse of TraceRecorder::to_csv. Throws SimError on malformed input.
std::vector<TraceRow> parse_trace_csv(const std::string& csv, std::string* run_id = nullptr);

// Shared helpers for building rows with CSV-roundtrip-exact numbers.
double round_ms(double v);  // llround(v * 1000) / 1000.0
// "key=value" lookup inside a ';'-separated detail string; throws when the
// key is required but absent.
bool detail_field(const std::string& detail, const std::string& key, std::string& out);
double detail_number(const std::string& detail, const std::string& key);

}  // namespace hive
