#include "hivemind/trace.hpp"

#include <algorithm>
#include <cstdio>

namespace hive {

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string format_ms(double v) { return format_fixed(v, 3); }

void TraceRecorder::finalize() {
  std::stable_sort(rows_.begin(), rows_.end(),
                   [](const TraceRow& a, const TraceRow& b) { return a.t < b.t; });
}

std::string TraceRecorder::to_csv(const std::string& run_id) const {
  std::string out = "run_id,t_ms,actor,event,task_type,latency_ms,bytes,battery_pct,detail\n";
  for (const auto& r : rows_) {
    out += run_id;
    out += ',';
    out += format_ms(to_ms(r.t));
    out += ',';
    out += r.actor;
    out += ',';
    out += r.event;
    out += ',';
    out += r.task_type;
    out += ',';
    if (r.latency_ms >= 0.0) out += format_ms(r.latency_ms);
    out += ',';
    if (r.bytes >= 0) out += std::to_string(r.bytes);
    out += ',';
    if (r.battery_pct >= 0.0) out += format_fixed(r.battery_pct, 3);
    out += ',';
    out += r.detail;
    out += '\n';
  }
  return out;
}

}  // namespace hive
