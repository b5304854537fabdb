#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hivemind/engine.hpp"
#include "hivemind/rng.hpp"
#include "hivemind/sim_time.hpp"

namespace hive {

enum class JobKind { item_recognition, people_recognition, disambiguation, retraining };
const char* job_kind_name(JobKind k);

enum class FnState { queued, running, complete, superseded };

struct FunctionInstance {
  std::uint64_t fn_id = 0;
  std::uint64_t job_id = 0;
  int slot = 0;  // index within the job; an original/respawn pair shares a slot
  int worker_id = -1;
  std::uint64_t container_id = 0;
  FnState state = FnState::queued;
  SimTime sampled_duration = 0;
  SimTime queued_time = 0;
  SimTime start_time = 0;
  SimTime end_time = 0;
  bool is_respawn = false;
  bool cold_start = false;
  bool respawned = false;  // a speculative twin was launched for this fn
  bool tripped_probation = false;  // this respawn pushed its worker into probation
};

struct ContainerRec {
  std::uint64_t container_id = 0;
  int worker_id = -1;
  SimTime created = 0;
  SimTime terminated = -1;
  int reuse_count = 0;
};

struct Job {
  std::uint64_t job_id = 0;
  JobKind kind = JobKind::item_recognition;
  int device_id = -1;
  std::int64_t photo_id = -1;
  SimTime submit_time = 0;
  SimTime complete_time = -1;
  int total_slots = 0;
  int resolved_slots = 0;
  double sched_latency_ms = 0.0;
};

struct StragglerConfig {
  bool enabled = true;
  double monitor_tick_ms = 10.0;
  double percentile = 0.90;
  int min_siblings = 10;
  double fallback_mean_factor = 2.0;
  int trip_count = 3;
  double trip_window_s = 60.0;
  double probation_s = 120.0;
  double inject_prob = 0.0;
  double inject_factor = 10.0;
};

struct TaskLatencySpec {
  double mean_ms = 100.0;
  double p99_ms = 250.0;
  LognormalSpec to_spec() const { return LognormalSpec::from_mean_p99(mean_ms, p99_ms); }
};

struct FanoutConfig {
  int item_recognition = 4;
  int people_recognition = 8;
  int disambiguation = 4;
  int retraining = 4;
};

struct TaskLatencyConfig {
  TaskLatencySpec item_recognition{23.0, 49.0};
  TaskLatencySpec people_recognition{59.0, 159.0};
  TaskLatencySpec disambiguation{59.0, 159.0};
  TaskLatencySpec retraining{900.0, 2200.0};
};

struct ClusterConfig {
  int workers = 12;
  int cpus_per_worker = 40;
  double keep_alive_ms = 1000.0;
  double cold_start_ms = 80.0;
  double sched_base_ms = 1.5;
  double sched_rate_coef = 0.1;
  double sched_p99_over_mean = 1.6;
  FanoutConfig fanout;
  TaskLatencyConfig task_latency;
  StragglerConfig straggler;

  int fanout_for(JobKind k) const;
  LognormalSpec latency_for(JobKind k) const;
};

// Nearest-rank percentile over a sample set (1-based rank ceil(p*n)).
double nearest_rank_percentile(std::vector<double> samples, double p);

// Behavioral model of the serverless backend: FIFO overload queue,
// warm-container reuse with keep-alive, straggler respawn races, and
// worker probation. All "parallelism" is virtual-time overlap.
class Cluster {
 public:
  Cluster(const ClusterConfig& cfg, Engine& engine, std::uint64_t master_seed);

  // Invoked once per job, at the virtual time the job result is available.
  std::function<void(const Job&)> on_job_complete;

  std::uint64_t submit_job(JobKind kind, int device_id, std::int64_t photo_id);

  // Accounting.
  const std::vector<FunctionInstance>& functions() const { return fns_; }
  const std::map<std::uint64_t, ContainerRec>& containers() const { return containers_; }
  const std::vector<Job>& jobs() const { return jobs_; }
  std::uint64_t unique_containers() const;
  std::uint64_t total_reuses() const;
  std::uint64_t executions() const { return executions_; }
  std::uint64_t respawns() const { return respawn_count_; }
  std::uint64_t superseded() const { return superseded_count_; }
  std::uint64_t probations() const { return probation_count_; }

  // Per-window count of CPUs with a running function, from the function log.
  std::vector<double> active_cpu_series(SimTime horizon, double window_s) const;
  double mean_active_cpus(SimTime horizon) const;

  // Latency from queue entry to the first completed twin, per resolved slot.
  std::vector<double> resolved_latencies_ms() const;

 private:
  struct Worker {
    int id = 0;
    int cpus = 0;
    int allocated = 0;
    SimTime probation_until = -1;
    std::deque<SimTime> straggler_times;
    // container_id -> keep-alive deadline
    std::map<std::uint64_t, SimTime> warm;
  };

  void try_place(std::uint64_t fn_id);
  void place_on(std::uint64_t fn_id, int worker_id);
  void drain_pending();
  void complete_fn(std::uint64_t fn_id);
  void supersede_twin(std::uint64_t winner_id);
  void resolve_slot(std::uint64_t winner_id);
  void monitor_tick();
  void ensure_monitor();
  void expire_containers();
  void schedule_expiry(SimTime deadline);
  int pick_worker(const FunctionInstance& fn) const;
  double historical_mean_ms(JobKind kind) const;
  SimTime sample_duration(JobKind kind, bool allow_inject = true);

  ClusterConfig cfg_;
  Engine& engine_;
  RngStream rng_;
  std::vector<Worker> workers_;
  std::vector<Job> jobs_;
  std::vector<FunctionInstance> fns_;
  std::map<std::uint64_t, ContainerRec> containers_;
  std::deque<std::uint64_t> pending_;
  std::deque<SimTime> recent_submits_;  // sliding window for scheduling-rate model
  std::uint64_t next_container_id_ = 0;
  std::uint64_t executions_ = 0;
  std::uint64_t respawn_count_ = 0;
  std::uint64_t superseded_count_ = 0;
  std::uint64_t probation_count_ = 0;
  int running_count_ = 0;
  bool monitor_scheduled_ = false;
  // completed duration history per kind, for the fallback threshold
  std::map<JobKind, std::pair<double, std::uint64_t>> duration_history_;
  // indexes kept in step with fns_ so the monitor avoids full scans
  std::vector<std::uint64_t> running_fns_;
  std::map<std::uint64_t, std::vector<double>> job_completed_ms_;
  std::map<std::pair<std::uint64_t, int>, std::vector<std::uint64_t>> slot_index_;
};

}  // namespace hive
