#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hivemind/sim_time.hpp"
#include "hivemind/world.hpp"

namespace hive {

// Every captured photo ends in exactly one terminal disposition.
enum class PhotoDisposition { in_flight, delivered, stored, lost };
const char* photo_disposition_name(PhotoDisposition d);

struct PhotoLogEntry {
  PhotoRecord photo;
  PhotoDisposition disposition = PhotoDisposition::in_flight;
  SimTime resolved_time = -1;
};

struct OnboardTaskEntry {
  SimTime start = 0;
  SimTime end = 0;
  int device_id = -1;
  std::string kind;  // "filter", "recognition", "avoidance"
  std::int64_t photo_id = -1;
};

struct DeviceEventEntry {
  SimTime t = 0;
  int device_id = -1;
  std::string event;
  std::string detail;
};

struct BatterySample {
  SimTime t = 0;
  int device_id = -1;
  double pct = 100.0;
};

struct RegistrationEntry {
  SimTime t = 0;
  std::string outcome;  // "unique", "duplicate", "false_positive", "discarded"
  int object_id = -1;
  std::int64_t photo_id = -1;
  int device_id = -1;
};

struct ControlEventEntry {
  SimTime t = 0;
  std::string event;
  std::string detail;
};

// Structured per-run record, appended to by every actor and assembled into
// the trace and summary after the run. Purely observational.
struct RunLog {
  std::vector<PhotoLogEntry> photos;
  std::vector<OnboardTaskEntry> onboard_tasks;
  std::vector<DeviceEventEntry> device_events;
  std::vector<BatterySample> battery_samples;
  std::vector<RegistrationEntry> registrations;
  std::vector<ControlEventEntry> control_events;
  std::vector<double> sched_latency_samples_ms;

  PhotoLogEntry& photo_entry(std::int64_t photo_id);
};

}  // namespace hive
