#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "hivemind/config.hpp"
#include "hivemind/engine.hpp"
#include "hivemind/messages.hpp"
#include "hivemind/network.hpp"
#include "hivemind/rng.hpp"
#include "hivemind/runlog.hpp"
#include "hivemind/world.hpp"

namespace hive {

class Controller;

enum class DevicePhase {
  idle,
  takeoff,
  transit,
  survey,
  returning,
  landed,
  crashed,
  battery_dead,
};
const char* phase_name(DevicePhase p);
bool phase_airborne(DevicePhase p);
bool phase_terminal(DevicePhase p);

// Per-drone agent: motion FSM, battery model, on-board compute, heartbeats,
// local photo store, and crash behavior. All coordination flows through
// network messages; peers are touched only for physical proximity checks.
class DeviceAgent {
 public:
  DeviceAgent(int id, Engine& engine, const World& world, Channel& channel,
              const ExperimentConfig& cfg, RunLog& log, std::uint64_t master_seed);

  void set_controller(Controller* c) { controller_ = c; }
  void set_peers(const std::vector<std::unique_ptr<DeviceAgent>>* peers) { peers_ = peers; }

  // --- command deliveries (the sender already paid the network delay) ---
  // Initial assignment: queue the task and lift off after start_delay.
  void on_mission_command(SurveyTask task, double start_delay_s);
  // Repartition/rebalance/revert: replaces the not-yet-started tail of the
  // task queue. The current task, if listed, keeps its live progress.
  void on_replace_tasks(std::vector<SurveyTask> tasks);
  void on_model_update(const DetectionModel& model);
  void on_peer_results(int src_device, const std::vector<LocalDetection>& results);

  // --- fault hooks ---
  void force_failure();  // power-off: absorbing, heartbeats stop, store lost
  void set_heartbeat_dropout(SimTime from, SimTime until);

  // --- state ---
  int id() const { return id_; }
  DevicePhase phase() const { return phase_; }
  double battery_pct() const { return battery_; }
  Point position() const;  // at engine.now()
  double cpu_load() const;  // busy fraction over the trailing 1 s
  const std::vector<SurveyTask>& tasks() const { return tasks_; }
  const DetectionModel& onboard_model() const { return model_; }
  bool powered() const { return !phase_terminal(phase_) || phase_ == DevicePhase::landed; }

  // Retained decentralized results after pairwise dedup (empty on crash).
  const std::vector<LocalDetection>& retained_results() const { return local_results_; }
  // Locally stored photo ids (hivemind negatives / decentralized archive).
  const std::vector<std::int64_t>& local_store() const { return local_store_; }

  std::uint64_t photos_taken() const { return photos_taken_; }
  std::uint64_t avoidance_events() const { return avoidance_events_; }
  double avoidance_delay_ms_total() const { return avoidance_delay_ms_; }

 private:
  enum class LegPurpose { to_task, waypoint, returning };

  std::string actor() const;
  void start_mission();
  void finish_takeoff();
  void begin_next_task();
  void begin_leg(Point dest, LegPurpose purpose);
  void on_arrival(std::uint64_t gen);
  void task_finished();
  void begin_return();
  void schedule_tick();
  void tick();
  void emit_heartbeat();
  void schedule_photo_timer();
  void photo_timer(std::uint64_t gen);
  void capture_photo();
  void enqueue_onboard(std::int64_t photo_id);
  void start_onboard();
  void onboard_done(std::int64_t photo_id);
  void add_busy(SimTime from, SimTime to);
  double busy_fraction(SimTime from, SimTime to) const;
  void schedule_obstacle();
  void obstacle_event(std::uint64_t gen);
  void crash(const std::string& cause);
  void battery_dead();
  void halt_motion_and_timers();
  void send_peer_results();
  void log_event(const std::string& event, const std::string& detail);
  const PhotoRecord& photo_by_id(std::int64_t photo_id) const;
  double drain_multiplier() const;
  double speed_multiplier() const;

  int id_;
  Engine& engine_;
  const World& world_;
  Channel& channel_;
  const ExperimentConfig& cfg_;
  RunLog& log_;
  Controller* controller_ = nullptr;
  const std::vector<std::unique_ptr<DeviceAgent>>* peers_ = nullptr;

  RngStream detect_rng_;
  RngStream compute_rng_;
  RngStream obstacle_rng_;
  RngStream face_rng_;

  DevicePhase phase_ = DevicePhase::idle;
  double battery_ = 100.0;
  Point home_;
  std::vector<SurveyTask> tasks_;
  DetectionModel model_;
  double footprint_w_ = 0.0;
  double footprint_h_ = 0.0;
  LognormalSpec avoid_spec_;

  // Active motion leg; gen guards against stale arrival events.
  bool leg_active_ = false;
  Point leg_from_;
  Point leg_to_;
  SimTime leg_t0_ = 0;
  SimTime leg_t1_ = 0;
  LegPurpose leg_purpose_ = LegPurpose::to_task;
  std::uint64_t leg_gen_ = 0;

  std::uint64_t photo_gen_ = 0;
  std::uint64_t obstacle_gen_ = 0;
  bool tick_scheduled_ = false;

  // Single on-board processor: FIFO photo queue plus avoidance bursts.
  std::deque<std::int64_t> compute_queue_;
  bool compute_busy_ = false;
  std::deque<std::pair<SimTime, SimTime>> busy_intervals_;

  std::vector<std::int64_t> local_store_;
  std::vector<LocalDetection> local_results_;
  std::set<std::pair<std::int64_t, int>> exchanged_;  // (photo, object) already sent to peers
  std::set<std::uint64_t> completed_tasks_;
  std::vector<std::vector<LocalDetection>> peer_batches_;

  SimTime dropout_from_ = -1;
  SimTime dropout_until_ = -1;

  std::int64_t next_photo_seq_ = 0;
  std::uint64_t photos_taken_ = 0;
  std::uint64_t avoidance_events_ = 0;
  double avoidance_delay_ms_ = 0.0;
  std::uint64_t next_task_fallback_id_ = 0;
};

}  // namespace hive
