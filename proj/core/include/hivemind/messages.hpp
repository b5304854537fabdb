#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hivemind/geometry.hpp"
#include "hivemind/planner.hpp"
#include "hivemind/sim_time.hpp"

namespace hive {

// One assigned survey unit: a region plus its boustrophedon route. A device
// works tasks in queue order; lane progress is reported back in heartbeats
// so the controller can repartition only the unsurveyed remainder.
struct SurveyTask {
  std::uint64_t task_id = 0;
  Rect rect;
  Route route;
  std::size_t next_waypoint = 0;
  bool started = false;

  int total_lanes() const { return static_cast<int>(route.waypoints.size() / 2); }
  // A lane counts as completed once both of its waypoints were reached.
  int completed_lanes() const { return static_cast<int>(next_waypoint / 2); }
  bool done() const { return next_waypoint >= route.waypoints.size(); }
};

struct TaskProgress {
  std::uint64_t task_id = 0;
  int completed_lanes = 0;
  bool current = false;
};

struct HeartbeatMsg {
  int device_id = -1;
  SimTime sent = 0;
  double battery_pct = 100.0;
  int phase = 0;  // DevicePhase as int, avoids a device.hpp include cycle
  std::vector<TaskProgress> progress;
  double remaining_route_m = 0.0;
  double effective_speed_mps = 0.0;
};

// Result of on-board recognition in decentralized mode, held locally and
// shared with border neighbors when the device finishes its region.
struct LocalDetection {
  int object_id = -1;  // -1 for a phantom (false positive)
  Point position;
  std::int64_t photo_id = 0;
  int device_id = -1;
  bool face_visible = false;
  SimTime detected_at = 0;
};

}  // namespace hive
