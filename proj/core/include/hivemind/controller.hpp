#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hivemind/cluster.hpp"
#include "hivemind/config.hpp"
#include "hivemind/device.hpp"
#include "hivemind/engine.hpp"
#include "hivemind/messages.hpp"
#include "hivemind/network.hpp"
#include "hivemind/runlog.hpp"
#include "hivemind/world.hpp"

namespace hive {

enum class AssignmentStatus { pending, active, surveyed, reassigned, reverted };
const char* assignment_status_name(AssignmentStatus s);

struct AssignmentEntry {
  std::uint64_t task_id = 0;
  int device_id = -1;
  Rect rect;
  Route route;
  AssignmentStatus status = AssignmentStatus::pending;
  int reported_lanes = 0;   // completed lanes per the latest heartbeat
  bool strip_started = false;  // recipient reported it as the current task
  std::uint64_t parent_task = 0;  // nonzero for repartition strips
};

struct ItemRegistration {
  int object_id = -1;
  Point position;
};

// Model feedback carried across missions when learning.missions > 1.
struct LearningState {
  int pooled_fp = 0;
  int pooled_fn = 0;
  std::map<int, std::pair<int, int>> per_device;  // id -> (fp, fn)
};

// Single logical control actor: initial assignment, heartbeat ledger and
// failure handling with revert, rebalancing, result registry with
// disambiguation, cloud job orchestration, and on-board model retraining.
// All control inputs arrive as network events; device objects are touched
// directly only for terminal-state bookkeeping and pre-mission model seeding.
class Controller {
 public:
  Controller(Engine& engine, const World& world, Channel& channel, Cluster* cluster,
             const ExperimentConfig& cfg, RunLog& log,
             std::vector<std::unique_ptr<DeviceAgent>>& devices, std::uint64_t master_seed,
             LearningState carryover = {});

  // Initial assignment + periodic checks + fault-injection schedule.
  void start();

  // --- network deliveries ---
  void on_heartbeat(const HeartbeatMsg& msg);
  void on_photo_delivered(const PhotoRecord& photo);
  void on_task_complete(int device_id, std::uint64_t task_id);

  // --- decentralized exchange accounting (completion bookkeeping only) ---
  void exchange_started();
  void exchange_finished();

  // A device announced an outbound cloud photo; paired with
  // on_photo_delivered so completion never races an in-flight transfer.
  void photo_in_flight();

  // Initial-partition adjacency, distributed to the swarm at mission start.
  std::vector<int> border_neighbors(int device_id) const;

  // --- registry (public so dedup behavior is unit-testable) ---
  // Returns "unique" or "duplicate".
  std::string register_item(int object_id, Point position, std::int64_t photo_id,
                            int device_id);
  // Returns "unique", "duplicate", or "discarded" (face not visible).
  std::string register_person(int object_id, bool face_visible, std::int64_t photo_id,
                              int device_id);

  // --- results ---
  bool mission_over() const { return mission_over_; }
  bool scenario_complete() const { return completion_time_ >= 0 && !scenario_failed_; }
  SimTime completion_time() const { return completion_time_; }
  bool scenario_failed() const { return scenario_failed_; }
  int unique_items() const { return static_cast<int>(items_.size()); }
  int unique_persons() const { return static_cast<int>(persons_.size()); }
  int duplicates() const { return duplicates_; }
  int confirmed_false_positives() const { return confirmed_fp_; }
  int failures_declared() const { return failures_declared_; }
  int reverts() const { return reverts_; }
  int rebalances() const { return rebalances_; }
  int retrain_rounds() const { return retrain_rounds_; }
  const std::map<std::uint64_t, AssignmentEntry>& assignments() const { return table_; }
  LearningState learning_state() const;

  // Rects whose union must tile the field after every repartition/rebalance:
  // surveyed slabs of retired entries plus all live entry rects.
  std::vector<Rect> tiling_rects() const;

 private:
  struct DeviceLedger {
    SimTime last_heard = 0;
    bool contacted = false;
    bool failed = false;
    HeartbeatMsg last_msg;
    bool shed_latched = false;
    int pending_fp_feedback = 0;
  };

  std::uint64_t new_task_id() { return next_task_id_++; }
  void send_command(int device_id, const std::string& what,
                    std::function<void(DeviceAgent&)> apply);
  void initial_assignment();
  void schedule_forced_failures();
  void heartbeat_check();
  void rebalance_check();
  void retrain_tick();
  void declare_failure(int device_id);
  void handle_failure(int device_id);
  void try_revert(int device_id);
  // lagger_proj_s >= 0 makes the shed conditional: it only happens when some
  // eligible neighbor is projected to finish the strip sooner than the
  // overloaded device would. Battery sheds pass -1 (unconditional).
  void shed_area(int device_id, double fraction, const std::string& why,
                 double lagger_proj_s = -1.0);
  std::vector<int> eligible_recipients(const Rect& region, int exclude_device) const;
  // Strip widths for the recipients of a failed region: water-filling over
  // each recipient's projected remaining work plus travel time, so the area
  // goes preferentially to devices with slack.
  std::vector<std::pair<int, double>> balanced_shares(const Rect& remainder,
                                                      const std::vector<int>& recipients) const;
  void assign_strips(const Rect& remainder, const std::vector<int>& recipients,
                     std::uint64_t parent_task, bool record_for_revert, int failed_device);
  Route route_for(const Rect& rect, int device_id) const;
  void submit_cloud_job(const PhotoRecord& photo);
  void job_completed(const Job& job);
  void verify_photo(const PhotoRecord& photo);
  void apply_retraining(const std::map<int, std::pair<int, int>>& batch);
  DetectionModel base_onboard_model() const;
  void mine_false_negatives();
  void audit_tiling_now(const std::string& after_what) const;
  void check_completion();
  void check_mission_over();
  void log_control(const std::string& event, const std::string& detail);
  bool device_airborne(int device_id) const;

  Engine& engine_;
  const World& world_;
  Channel& channel_;
  Cluster* cluster_;
  const ExperimentConfig& cfg_;
  RunLog& log_;
  std::vector<std::unique_ptr<DeviceAgent>>& devices_;
  RngStream fault_rng_;
  Footprint footprint_;

  std::map<std::uint64_t, AssignmentEntry> table_;
  std::map<int, DeviceLedger> ledger_;
  std::uint64_t next_task_id_ = 1;

  // Revert bookkeeping: strips created for a declared failure, removable
  // until any recipient starts one.
  struct FailureRecord {
    std::vector<std::uint64_t> strip_ids;
    std::vector<AssignmentEntry> saved_entries;  // pre-failure table rows
  };
  std::map<int, FailureRecord> open_failures_;

  std::vector<ItemRegistration> items_;
  std::set<int> persons_;
  int duplicates_ = 0;
  int confirmed_fp_ = 0;
  int failures_declared_ = 0;
  int reverts_ = 0;
  int rebalances_ = 0;
  int retrain_rounds_ = 0;

  int open_tasks_ = 0;
  int outstanding_photos_ = 0;
  int outstanding_exchanges_ = 0;
  std::map<std::uint64_t, PhotoRecord> jobs_in_flight_;

  SimTime completion_time_ = -1;
  bool scenario_failed_ = false;
  bool mission_over_ = false;

  // Learning state (pooled for global scope, per device otherwise).
  LearningState learning_;
  DetectionModel global_model_;
  std::map<int, DetectionModel> device_models_;
};

}  // namespace hive
