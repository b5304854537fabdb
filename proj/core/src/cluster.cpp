#include "hivemind/cluster.hpp"

#include <algorithm>
#include <cmath>

namespace hive {

const char* job_kind_name(JobKind k) {
  switch (k) {
    case JobKind::item_recognition: return "item_recognition";
    case JobKind::people_recognition: return "people_recognition";
    case JobKind::disambiguation: return "disambiguation";
    case JobKind::retraining: return "retraining";
  }
  return "?";
}

int ClusterConfig::fanout_for(JobKind k) const {
  switch (k) {
    case JobKind::item_recognition: return fanout.item_recognition;
    case JobKind::people_recognition: return fanout.people_recognition;
    case JobKind::disambiguation: return fanout.disambiguation;
    case JobKind::retraining: return fanout.retraining;
  }
  throw SimError("cluster: unknown job kind");
}

LognormalSpec ClusterConfig::latency_for(JobKind k) const {
  switch (k) {
    case JobKind::item_recognition: return task_latency.item_recognition.to_spec();
    case JobKind::people_recognition: return task_latency.people_recognition.to_spec();
    case JobKind::disambiguation: return task_latency.disambiguation.to_spec();
    case JobKind::retraining: return task_latency.retraining.to_spec();
  }
  throw SimError("cluster: unknown job kind");
}

double nearest_rank_percentile(std::vector<double> samples, double p) {
  if (samples.empty()) throw SimError("percentile of empty sample set");
  std::sort(samples.begin(), samples.end());
  std::size_t rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(samples.size())));
  if (rank == 0) rank = 1;
  return samples[std::min(rank, samples.size()) - 1];
}

Cluster::Cluster(const ClusterConfig& cfg, Engine& engine, std::uint64_t master_seed)
    : cfg_(cfg), engine_(engine), rng_(master_seed, "cluster") {
  workers_.resize(static_cast<std::size_t>(cfg.workers));
  for (int i = 0; i < cfg.workers; ++i) {
    workers_[static_cast<std::size_t>(i)].id = i;
    workers_[static_cast<std::size_t>(i)].cpus = cfg.cpus_per_worker;
  }
}

SimTime Cluster::sample_duration(JobKind kind, bool allow_inject) {
  double ms = cfg_.latency_for(kind).sample(rng_);
  // Injected slowdowns model a misbehaving worker. A respawn is placed away
  // from that worker, so it draws from the clean distribution.
  if (allow_inject && cfg_.straggler.inject_prob > 0.0 &&
      rng_.bernoulli(cfg_.straggler.inject_prob)) {
    ms *= cfg_.straggler.inject_factor;
  }
  return from_ms(ms);
}

std::uint64_t Cluster::submit_job(JobKind kind, int device_id, std::int64_t photo_id) {
  SimTime now = engine_.now();
  // Scheduling latency grows with recent job arrival rate (scheduler
  // serialization); calibrated against the reported per-platform means.
  while (!recent_submits_.empty() && recent_submits_.front() < now - kUsPerS) {
    recent_submits_.pop_front();
  }
  recent_submits_.push_back(now);
  double rate = static_cast<double>(recent_submits_.size());
  double sched_mean = cfg_.sched_base_ms + cfg_.sched_rate_coef * rate;
  auto sched_spec = LognormalSpec::from_mean_p99(sched_mean, sched_mean * cfg_.sched_p99_over_mean);
  double sched_ms = sched_spec.sample(rng_);

  Job job;
  job.job_id = jobs_.size();
  job.kind = kind;
  job.device_id = device_id;
  job.photo_id = photo_id;
  job.submit_time = now;
  job.total_slots = cfg_.fanout_for(kind);
  job.sched_latency_ms = sched_ms;
  jobs_.push_back(job);

  std::uint64_t job_id = job.job_id;
  engine_.schedule_in(from_ms(sched_ms), EventPriority::compute_completion, "cluster",
                      "job_fanout", [this, job_id] {
                        const Job& j = jobs_[job_id];
                        for (int s = 0; s < j.total_slots; ++s) {
                          FunctionInstance fn;
                          fn.fn_id = fns_.size();
                          fn.job_id = job_id;
                          fn.slot = s;
                          fn.sampled_duration = sample_duration(j.kind);
                          fn.queued_time = engine_.now();
                          fns_.push_back(fn);
                          slot_index_[{job_id, s}].push_back(fn.fn_id);
                          try_place(fn.fn_id);
                        }
                        ensure_monitor();
                      });
  return job_id;
}

int Cluster::pick_worker(const FunctionInstance& fn) const {
  SimTime now = engine_.now();
  // For respawns, worker_id carries the misbehaving server to avoid;
  // -1 means no exclusion.
  int exclude = fn.is_respawn ? fn.worker_id : -1;

  int best = -1;
  bool best_warm = false;
  int best_alloc = 0;
  for (const auto& w : workers_) {
    if (w.id == exclude) continue;
    if (w.probation_until > now) continue;
    if (w.allocated >= w.cpus) continue;
    bool warm = !w.warm.empty();
    if (best == -1 || (warm && !best_warm) ||
        (warm == best_warm && w.allocated < best_alloc)) {
      best = w.id;
      best_warm = warm;
      best_alloc = w.allocated;
    }
  }
  return best;
}

void Cluster::try_place(std::uint64_t fn_id) {
  FunctionInstance& fn = fns_[fn_id];
  if (fn.state != FnState::queued) return;
  int worker = pick_worker(fn);
  if (worker < 0) {
    pending_.push_back(fn_id);
    return;
  }
  place_on(fn_id, worker);
}

void Cluster::place_on(std::uint64_t fn_id, int worker_id) {
  FunctionInstance& fn = fns_[fn_id];
  Worker& w = workers_[static_cast<std::size_t>(worker_id)];
  ++w.allocated;
  ++running_count_;
  fn.worker_id = worker_id;
  fn.state = FnState::running;
  fn.start_time = engine_.now();
  running_fns_.push_back(fn_id);
  ++executions_;

  SimTime duration = fn.sampled_duration;
  if (!w.warm.empty()) {
    // reuse the most recently warmed container
    auto best = w.warm.begin();
    for (auto it = w.warm.begin(); it != w.warm.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    fn.container_id = best->first;
    containers_[best->first].reuse_count += 1;
    w.warm.erase(best);
  } else {
    fn.container_id = next_container_id_++;
    fn.cold_start = true;
    containers_[fn.container_id] = ContainerRec{fn.container_id, worker_id, engine_.now(), -1, 0};
    duration += from_ms(cfg_.cold_start_ms);
  }

  engine_.schedule_in(duration, EventPriority::compute_completion, "cluster", "fn_complete",
                      [this, fn_id] { complete_fn(fn_id); });
}

void Cluster::drain_pending() {
  // FIFO: place as many pending functions as capacity allows
  std::size_t n = pending_.size();
  for (std::size_t i = 0; i < n && !pending_.empty(); ++i) {
    std::uint64_t fn_id = pending_.front();
    pending_.pop_front();
    FunctionInstance& fn = fns_[fn_id];
    if (fn.state != FnState::queued) continue;
    int worker = pick_worker(fn);
    if (worker < 0) {
      pending_.push_back(fn_id);
      break;  // FIFO head blocked; keep order
    }
    place_on(fn_id, worker);
  }
}

void Cluster::complete_fn(std::uint64_t fn_id) {
  FunctionInstance& fn = fns_[fn_id];
  if (fn.state == FnState::superseded) return;  // lost the race while running
  if (fn.state != FnState::running) return;
  fn.state = FnState::complete;
  fn.end_time = engine_.now();

  Worker& w = workers_[static_cast<std::size_t>(fn.worker_id)];
  --w.allocated;
  --running_count_;

  // container becomes warm, or terminates immediately with keep-alive 0
  if (cfg_.keep_alive_ms > 0.0) {
    SimTime deadline = engine_.now() + from_ms(cfg_.keep_alive_ms);
    w.warm[fn.container_id] = deadline;
    schedule_expiry(deadline);
  } else {
    containers_[fn.container_id].terminated = engine_.now();
  }

  // Straggler accounting excludes container start-up: a cold start is a
  // placement artifact, not the function running slowly.
  double run_ms = to_ms(fn.end_time - fn.start_time) -
                  (fn.cold_start ? cfg_.cold_start_ms : 0.0);
  auto& hist = duration_history_[jobs_[fn.job_id].kind];
  hist.first += run_ms;
  hist.second += 1;
  job_completed_ms_[fn.job_id].push_back(run_ms);
  std::erase(running_fns_, fn_id);

  resolve_slot(fn_id);
  drain_pending();
}

void Cluster::resolve_slot(std::uint64_t winner_id) {
  FunctionInstance& winner = fns_[winner_id];
  Job& job = jobs_[winner.job_id];
  supersede_twin(winner_id);
  ++job.resolved_slots;
  if (job.resolved_slots == job.total_slots && job.complete_time < 0) {
    job.complete_time = engine_.now();
    if (on_job_complete) {
      std::uint64_t job_id = job.job_id;
      engine_.schedule_in(0, EventPriority::compute_completion, "cluster", "job_complete",
                          [this, job_id] { on_job_complete(jobs_[job_id]); });
    }
  }
}

void Cluster::supersede_twin(std::uint64_t winner_id) {
  const FunctionInstance& winner = fns_[winner_id];
  for (std::uint64_t twin_id : slot_index_[{winner.job_id, winner.slot}]) {
    if (twin_id == winner_id) continue;
    FunctionInstance& fn = fns_[twin_id];
    if (fn.state == FnState::complete || fn.state == FnState::superseded) continue;
    if (fn.state == FnState::running) {
      Worker& w = workers_[static_cast<std::size_t>(fn.worker_id)];
      --w.allocated;
      --running_count_;
      // its container goes warm like any other release
      if (cfg_.keep_alive_ms > 0.0) {
        SimTime deadline = engine_.now() + from_ms(cfg_.keep_alive_ms);
        w.warm[fn.container_id] = deadline;
        schedule_expiry(deadline);
      } else {
        containers_[fn.container_id].terminated = engine_.now();
      }
    }
    if (fn.state == FnState::running) std::erase(running_fns_, twin_id);
    fn.state = FnState::superseded;
    fn.end_time = engine_.now();
    ++superseded_count_;
  }
}

void Cluster::schedule_expiry(SimTime deadline) {
  engine_.schedule(deadline, EventPriority::compute_completion, "cluster", "container_expiry",
                   [this] { expire_containers(); });
}

void Cluster::expire_containers() {
  SimTime now = engine_.now();
  for (auto& w : workers_) {
    for (auto it = w.warm.begin(); it != w.warm.end();) {
      if (it->second <= now) {
        containers_[it->first].terminated = now;
        it = w.warm.erase(it);
      } else {
        ++it;
      }
    }
  }
}

void Cluster::ensure_monitor() {
  if (monitor_scheduled_ || !cfg_.straggler.enabled) return;
  monitor_scheduled_ = true;
  engine_.schedule_in(from_ms(cfg_.straggler.monitor_tick_ms), EventPriority::compute_completion,
                      "cluster", "straggler_check", [this] {
                        monitor_scheduled_ = false;
                        monitor_tick();
                      });
}

double Cluster::historical_mean_ms(JobKind kind) const {
  auto it = duration_history_.find(kind);
  if (it == duration_history_.end() || it->second.second == 0) return -1.0;
  return it->second.first / static_cast<double>(it->second.second);
}

void Cluster::monitor_tick() {
  SimTime now = engine_.now();
  std::vector<std::uint64_t> to_respawn;
  for (std::uint64_t fn_id : running_fns_) {
    const FunctionInstance& fn = fns_[fn_id];
    if (fn.is_respawn || fn.respawned) continue;
    const Job& job = jobs_[fn.job_id];
    double elapsed_ms =
        to_ms(now - fn.start_time) - (fn.cold_start ? cfg_.cold_start_ms : 0.0);
    if (elapsed_ms <= 0.0) continue;  // still inside container start-up

    double threshold;
    auto it = job_completed_ms_.find(fn.job_id);
    if (it != job_completed_ms_.end() &&
        static_cast<int>(it->second.size()) >= cfg_.straggler.min_siblings) {
      threshold = nearest_rank_percentile(it->second, cfg_.straggler.percentile);
    } else {
      double hist = historical_mean_ms(job.kind);
      if (hist < 0.0) continue;
      threshold = cfg_.straggler.fallback_mean_factor * hist;
    }
    if (elapsed_ms > threshold) to_respawn.push_back(fn.fn_id);
  }

  for (std::uint64_t orig_id : to_respawn) {
    FunctionInstance& orig = fns_[orig_id];
    orig.respawned = true;
    ++respawn_count_;

    Worker& w = workers_[static_cast<std::size_t>(orig.worker_id)];
    w.straggler_times.push_back(now);
    while (!w.straggler_times.empty() &&
           w.straggler_times.front() < now - from_s(cfg_.straggler.trip_window_s)) {
      w.straggler_times.pop_front();
    }
    bool tripped = false;
    if (static_cast<int>(w.straggler_times.size()) >= cfg_.straggler.trip_count &&
        w.probation_until <= now) {
      w.probation_until = now + from_s(cfg_.straggler.probation_s);
      ++probation_count_;
      tripped = true;
    }

    FunctionInstance respawn;
    respawn.fn_id = fns_.size();
    respawn.job_id = orig.job_id;
    respawn.slot = orig.slot;
    respawn.is_respawn = true;
    respawn.tripped_probation = tripped;
    respawn.sampled_duration = sample_duration(jobs_[orig.job_id].kind, false);
    respawn.queued_time = now;
    // worker_id carries the exclusion (the misbehaving server) into placement
    respawn.worker_id = orig.worker_id;
    fns_.push_back(respawn);
    slot_index_[{respawn.job_id, respawn.slot}].push_back(respawn.fn_id);
    try_place(respawn.fn_id);
  }

  if (running_count_ > 0 || !pending_.empty()) ensure_monitor();
}

std::uint64_t Cluster::unique_containers() const { return containers_.size(); }

std::uint64_t Cluster::total_reuses() const {
  std::uint64_t n = 0;
  for (const auto& [id, c] : containers_) n += static_cast<std::uint64_t>(c.reuse_count);
  return n;
}

std::vector<double> Cluster::active_cpu_series(SimTime horizon, double window_s) const {
  SimTime window = from_s(window_s);
  std::size_t n = static_cast<std::size_t>(horizon / window) + 1;
  std::vector<double> busy_us(n, 0.0);
  for (const auto& fn : fns_) {
    if (fn.start_time == 0 && fn.state == FnState::queued) continue;
    SimTime end = fn.end_time > 0 ? fn.end_time : horizon;
    if (fn.state == FnState::running) end = horizon;
    if (fn.start_time >= end) continue;
    for (SimTime t = fn.start_time; t < end;) {
      std::size_t w = static_cast<std::size_t>(t / window);
      if (w >= n) break;
      SimTime w_end = static_cast<SimTime>(w + 1) * window;
      SimTime upto = std::min(end, w_end);
      busy_us[w] += static_cast<double>(upto - t);
      t = upto;
    }
  }
  for (auto& b : busy_us) b /= static_cast<double>(window);
  return busy_us;
}

double Cluster::mean_active_cpus(SimTime horizon) const {
  if (horizon <= 0) return 0.0;
  double busy = 0.0;
  for (const auto& fn : fns_) {
    if (fn.start_time <= 0 && fn.state == FnState::queued) continue;
    SimTime end = fn.end_time > 0 ? fn.end_time : horizon;
    if (end > fn.start_time) busy += static_cast<double>(end - fn.start_time);
  }
  return busy / static_cast<double>(horizon);
}

std::vector<double> Cluster::resolved_latencies_ms() const {
  // per (job, slot): first completion time minus earliest queue entry
  std::map<std::pair<std::uint64_t, int>, std::pair<SimTime, SimTime>> slots;  // (queued, end)
  for (const auto& fn : fns_) {
    auto key = std::make_pair(fn.job_id, fn.slot);
    auto it = slots.find(key);
    if (it == slots.end()) {
      slots[key] = {fn.queued_time, fn.state == FnState::complete ? fn.end_time : -1};
    } else {
      it->second.first = std::min(it->second.first, fn.queued_time);
      if (fn.state == FnState::complete) {
        if (it->second.second < 0 || fn.end_time < it->second.second) {
          it->second.second = fn.end_time;
        }
      }
    }
  }
  std::vector<double> out;
  for (const auto& [key, v] : slots) {
    if (v.second >= 0) out.push_back(to_ms(v.second - v.first));
  }
  return out;
}

}  // namespace hive
