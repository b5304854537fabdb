#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hivemind/sim_time.hpp"

namespace hive {

// One trace CSV row. Optional numeric fields use -1 as "absent" and are
// emitted as empty cells.
struct TraceRow {
  SimTime t = 0;
  std::string actor;
  std::string event;
  std::string task_type;
  double latency_ms = -1.0;
  std::int64_t bytes = -1;
  double battery_pct = -1.0;
  std::string detail;
};

// Collects rows during a run and serializes them in deterministic order and
// formatting. The trace is observational only: recording never feeds back
// into simulation state.
class TraceRecorder {
 public:
  void add(TraceRow row) { rows_.push_back(std::move(row)); }
  const std::vector<TraceRow>& rows() const { return rows_; }

  // Stable sort by time; equal-time rows keep insertion order.
  void finalize();
  // Header: run_id,t_ms,actor,event,task_type,latency_ms,bytes,battery_pct,detail
  std::string to_csv(const std::string& run_id) const;

 private:
  std::vector<TraceRow> rows_;
};

// Fixed-precision, locale-independent number formatting shared by all
// deterministic output files.
std::string format_ms(double v);
std::string format_fixed(double v, int decimals);

}  // namespace hive
