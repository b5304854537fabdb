#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hivemind/cluster.hpp"
#include "hivemind/cost.hpp"
#include "hivemind/geometry.hpp"
#include "hivemind/network.hpp"
#include "hivemind/world.hpp"

namespace hive {

enum class Platform { centralized, decentralized, hivemind };
enum class Scenario { items, people };

const char* platform_name(Platform p);
const char* scenario_name(Scenario s);
Platform platform_from_string(const std::string& s);
Scenario scenario_from_string(const std::string& s);

struct BatteryConfig {
  double hover_pct_per_s = 0.33;
  double compute_pct_per_s = 0.18;
  double takeoff_pct = 2.0;
  std::map<int, double> drain_multipliers;  // per-device firmware-fault knob
};

struct ObstacleConfig {
  double rate_per_s = 0.05;
  double density_radius_m = 10.0;
  int density_limit = 2;
  double avoid_latency_mean_ms = 50.0;
  double avoid_latency_p99_ms = 120.0;
  double crash_h0 = 0.02;
  double crash_load_threshold = 0.6;
};

struct OnboardModelConfig {
  double tpr = 0.9;
  double fpr = 0.1;
  double floor_fpr = 0.01;
  double floor_fnr = 0.0;
  double kappa_fp = 5.0;
  double kappa_fn = 0.5;
  double latency_mean_ms = 30.0;
  double latency_p99_ms = 80.0;

  DetectionModel to_model() const;
};

struct DeviceBlockConfig {
  int count = 16;
  double speed_mps = 4.0;
  double photo_interval_s = 1.0;
  double takeoff_s = 2.0;
  double stagger_s = 0.1;
  Point takeoff_point{0.0, 0.0};
  double motion_degradation = 0.6;
  BatteryConfig battery;
  ObstacleConfig obstacle;
  std::map<int, double> speed_multipliers;  // per-device underperformance knob
  OnboardModelConfig filter_items;
  OnboardModelConfig filter_people;
  OnboardModelConfig recognize_items;
  OnboardModelConfig recognize_people;
};

struct PlannerBlockConfig {
  double altitude_m = 5.0;
  double fov_diag_deg = 92.0;
  double aspect_w = 4.0;
  double aspect_h = 3.0;
  // Paper calibration constant; set either dimension to 0 to derive the
  // footprint from the FoV instead.
  double footprint_override_w_m = 6.7;
  double footprint_override_h_m = 8.75;
  double lane_overlap = 0.1045;  // 6.7m footprint -> 6.0m lane spacing
  double rebalance_battery_threshold_pct = 25.0;
};

struct NetworkBlockConfig {
  ChannelConfig channel;
  std::int64_t photo_bytes = 4168269;  // 867e6 / (26 * 8 * 1Hz)
  std::int64_t heartbeat_bytes = 200;
  std::int64_t command_bytes = 1024;
  std::int64_t coords_bytes_per_item = 64;
  std::int64_t model_redeploy_bytes = 5000000;
};

struct LearningConfig {
  bool online_retraining = false;
  std::string scope = "global";  // or "per_device"
  double retrain_interval_s = 10.0;
  bool mine_false_negatives = true;
  int missions = 1;
};

struct ControllerBlockConfig {
  double heartbeat_timeout_s = 3.0;
  double heartbeat_check_interval_s = 1.0;
  double rebalance_interval_s = 5.0;
  double progress_lag_threshold = 0.25;
  double dedup_radius_m = 0.5;
  LearningConfig learning;
};

struct FaultBlockConfig {
  int forced_failures = 0;
  double window_lo = 0.2;  // fraction of the estimated nominal completion
  double window_hi = 0.8;
  // Test hook: device silenced (no heartbeats) for [t, t+duration), then
  // resumes. Exercises failure declaration and revert.
  int dropout_device = -1;
  double dropout_t_s = 0.0;
  double dropout_duration_s = 0.0;
};

struct ExperimentConfig {
  Scenario scenario = Scenario::items;
  Platform platform = Platform::centralized;
  std::uint64_t seed = 1;
  std::string out_dir;
  WorldConfig world;
  PlannerBlockConfig planner;
  DeviceBlockConfig devices;
  NetworkBlockConfig network;
  ClusterConfig cluster;
  ControllerBlockConfig controller;
  FaultBlockConfig faults;
  Pricing pricing;

  std::string run_id() const;
};

struct LoadedConfig {
  ExperimentConfig config;
  std::vector<std::string> warnings;
};

// Parses, defaults, and validates. Unknown keys and invalid combinations
// are errors listing every offending key.
LoadedConfig load_config_file(const std::string& path,
                              const std::vector<std::string>& overrides = {});
LoadedConfig load_config_json(const std::string& json_text,
                              const std::vector<std::string>& overrides = {});

// Applies a dotted-path override ("cluster.keep_alive_ms=0") to a JSON text.
std::string apply_overrides_to_json(const std::string& json_text,
                                    const std::vector<std::string>& overrides);

// Resolved config back to canonical JSON (written next to the trace so the
// audit tool can recompute the summary).
std::string config_to_json(const ExperimentConfig& cfg);

}  // namespace hive
