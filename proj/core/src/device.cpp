#include "hivemind/device.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hivemind/controller.hpp"
#include "hivemind/planner.hpp"

namespace hive {

namespace {
constexpr double kMinSpeedFactor = 0.25;  // degradation floor: never hover in place
constexpr SimTime kLoadWindow = kUsPerS;  // cpu_load trailing window
}  // namespace

const char* phase_name(DevicePhase p) {
  switch (p) {
    case DevicePhase::idle: return "idle";
    case DevicePhase::takeoff: return "takeoff";
    case DevicePhase::transit: return "transit";
    case DevicePhase::survey: return "survey";
    case DevicePhase::returning: return "returning";
    case DevicePhase::landed: return "landed";
    case DevicePhase::crashed: return "crashed";
    case DevicePhase::battery_dead: return "battery_dead";
  }
  return "?";
}

bool phase_airborne(DevicePhase p) {
  return p == DevicePhase::takeoff || p == DevicePhase::transit || p == DevicePhase::survey ||
         p == DevicePhase::returning;
}

bool phase_terminal(DevicePhase p) {
  return p == DevicePhase::landed || p == DevicePhase::crashed ||
         p == DevicePhase::battery_dead;
}

DeviceAgent::DeviceAgent(int id, Engine& engine, const World& world, Channel& channel,
                         const ExperimentConfig& cfg, RunLog& log, std::uint64_t master_seed)
    : id_(id),
      engine_(engine),
      world_(world),
      channel_(channel),
      cfg_(cfg),
      log_(log),
      detect_rng_(master_seed, "detect-" + std::to_string(id)),
      compute_rng_(master_seed, "compute-" + std::to_string(id)),
      obstacle_rng_(master_seed, "obstacle-" + std::to_string(id)),
      face_rng_(master_seed, "face-" + std::to_string(id)),
      home_(cfg.devices.takeoff_point),
      leg_from_(cfg.devices.takeoff_point),
      leg_to_(cfg.devices.takeoff_point) {
  const auto& p = cfg.planner;
  Footprint fp;
  if (p.footprint_override_w_m > 0.0 && p.footprint_override_h_m > 0.0) {
    fp = Footprint{p.footprint_override_w_m, p.footprint_override_h_m};
  } else {
    fp = footprint_from_fov(p.altitude_m, p.fov_diag_deg, p.aspect_w, p.aspect_h);
  }
  footprint_w_ = fp.width;
  footprint_h_ = fp.height;
  avoid_spec_ = LognormalSpec::from_mean_p99(cfg.devices.obstacle.avoid_latency_mean_ms,
                                             cfg.devices.obstacle.avoid_latency_p99_ms);

  bool items = cfg.scenario == Scenario::items;
  switch (cfg.platform) {
    case Platform::centralized:
      break;  // no on-board recognition
    case Platform::hivemind:
      model_ = (items ? cfg.devices.filter_items : cfg.devices.filter_people).to_model();
      break;
    case Platform::decentralized:
      model_ = (items ? cfg.devices.recognize_items : cfg.devices.recognize_people).to_model();
      break;
  }
}

std::string DeviceAgent::actor() const { return "drone-" + std::to_string(id_); }

double DeviceAgent::drain_multiplier() const {
  auto it = cfg_.devices.battery.drain_multipliers.find(id_);
  return it == cfg_.devices.battery.drain_multipliers.end() ? 1.0 : it->second;
}

double DeviceAgent::speed_multiplier() const {
  auto it = cfg_.devices.speed_multipliers.find(id_);
  return it == cfg_.devices.speed_multipliers.end() ? 1.0 : it->second;
}

void DeviceAgent::log_event(const std::string& event, const std::string& detail) {
  log_.device_events.push_back({engine_.now(), id_, event, detail});
}

Point DeviceAgent::position() const {
  if (!leg_active_) return leg_to_;
  SimTime now = engine_.now();
  if (now <= leg_t0_ || leg_t1_ <= leg_t0_) return leg_from_;
  if (now >= leg_t1_) return leg_to_;
  double f = static_cast<double>(now - leg_t0_) / static_cast<double>(leg_t1_ - leg_t0_);
  return {leg_from_.x + f * (leg_to_.x - leg_from_.x),
          leg_from_.y + f * (leg_to_.y - leg_from_.y)};
}

// --- commands ---

void DeviceAgent::on_mission_command(SurveyTask task, double start_delay_s) {
  if (phase_terminal(phase_)) return;
  tasks_.push_back(std::move(task));
  if (phase_ == DevicePhase::idle) {
    engine_.schedule_in(from_s(start_delay_s), EventPriority::control, actor(), "mission_start",
                        [this] { start_mission(); });
  }
}

void DeviceAgent::on_replace_tasks(std::vector<SurveyTask> tasks) {
  if (phase_terminal(phase_)) return;
  // The controller may still list a task whose completion notice is in
  // flight; re-adopting it would re-survey a finished region.
  std::erase_if(tasks, [&](const SurveyTask& t) { return completed_tasks_.count(t.task_id) > 0; });
  std::uint64_t current_id = tasks_.empty() ? 0 : tasks_.front().task_id;
  std::size_t live_wp = tasks_.empty() ? 0 : tasks_.front().next_waypoint;
  bool live_started = !tasks_.empty() && tasks_.front().started;

  tasks_ = std::move(tasks);
  bool current_kept = false;
  for (auto& t : tasks_) {
    if (t.task_id == current_id && live_started) {
      t.next_waypoint = std::min(live_wp, t.route.waypoints.size());
      t.started = true;
      current_kept = true;
    }
  }
  // Keep the live task first so progress semantics stay queue-ordered.
  if (current_kept && tasks_.front().task_id != current_id) {
    auto it = std::find_if(tasks_.begin(), tasks_.end(),
                           [&](const SurveyTask& t) { return t.task_id == current_id; });
    std::rotate(tasks_.begin(), it, it + 1);
  }
  log_event("tasks_replaced", std::to_string(tasks_.size()) + " tasks");

  if (phase_ != DevicePhase::transit && phase_ != DevicePhase::survey &&
      phase_ != DevicePhase::returning) {
    return;  // idle/takeoff devices proceed when their FSM reaches the queue
  }
  if (tasks_.empty()) {
    halt_motion_and_timers();
    begin_return();
    return;
  }
  if (current_kept) {
    auto& cur = tasks_.front();
    if (cur.done()) {
      halt_motion_and_timers();
      task_finished();
    }
    // Otherwise the live leg still targets a kept waypoint (truncation only
    // removes un-started lanes) and motion continues undisturbed.
    return;
  }
  // Current task was withdrawn or this device gained work while returning.
  halt_motion_and_timers();
  begin_next_task();
}

void DeviceAgent::on_model_update(const DetectionModel& model) {
  if (phase_terminal(phase_) && phase_ != DevicePhase::landed) return;
  model_ = model;
  log_event("model_update", "fpr=" + std::to_string(model.fpr()) +
                                " fnr=" + std::to_string(model.fnr()));
}

void DeviceAgent::on_peer_results(int src_device, const std::vector<LocalDetection>& results) {
  if (phase_ == DevicePhase::crashed || phase_ == DevicePhase::battery_dead) return;
  if (src_device < id_) return;  // the lower-id side of the pair does the discard
  std::size_t before = local_results_.size();
  local_results_.erase(
      std::remove_if(local_results_.begin(), local_results_.end(),
                     [&](const LocalDetection& mine) {
                       if (mine.object_id < 0) return false;  // phantoms never match
                       for (const auto& theirs : results) {
                         if (theirs.object_id == mine.object_id) return true;
                       }
                       return false;
                     }),
      local_results_.end());
  std::size_t dropped = before - local_results_.size();
  if (dropped > 0) {
    log_event("peer_dedup", "dropped " + std::to_string(dropped) + " vs drone-" +
                                std::to_string(src_device));
  }
}

// --- faults ---

void DeviceAgent::force_failure() {
  if (phase_terminal(phase_)) return;
  crash("forced_failure");
}

void DeviceAgent::set_heartbeat_dropout(SimTime from, SimTime until) {
  dropout_from_ = from;
  dropout_until_ = until;
}

// --- FSM ---

void DeviceAgent::start_mission() {
  if (phase_ != DevicePhase::idle) return;
  phase_ = DevicePhase::takeoff;
  battery_ = std::max(0.0, battery_ - cfg_.devices.battery.takeoff_pct);
  log_event("takeoff", "");
  schedule_tick();
  schedule_obstacle();
  engine_.schedule_in(from_s(cfg_.devices.takeoff_s), EventPriority::control, actor(),
                      "takeoff_done", [this] { finish_takeoff(); });
}

void DeviceAgent::finish_takeoff() {
  if (phase_ != DevicePhase::takeoff) return;
  begin_next_task();
}

void DeviceAgent::begin_next_task() {
  if (phase_terminal(phase_)) return;
  if (tasks_.empty()) {
    begin_return();
    return;
  }
  phase_ = DevicePhase::transit;
  const auto& route = tasks_.front().route;
  if (route.waypoints.empty()) throw SimError(actor() + ": task with empty route");
  begin_leg(route.waypoints.front(), LegPurpose::to_task);
}

void DeviceAgent::begin_return() {
  if (phase_terminal(phase_)) return;
  phase_ = DevicePhase::returning;
  photo_gen_++;
  begin_leg(home_, LegPurpose::returning);
}

void DeviceAgent::begin_leg(Point dest, LegPurpose purpose) {
  Point from = position();
  leg_gen_++;
  leg_from_ = from;
  leg_to_ = dest;
  leg_purpose_ = purpose;
  leg_t0_ = engine_.now();
  double dist = distance(from, dest);
  double factor = std::max(kMinSpeedFactor, 1.0 - cfg_.devices.motion_degradation * cpu_load());
  double v = cfg_.devices.speed_mps * speed_multiplier() * factor;
  leg_t1_ = leg_t0_ + (dist <= 0.0 ? 0 : from_s(dist / v));
  leg_active_ = true;
  std::uint64_t gen = leg_gen_;
  engine_.schedule(leg_t1_, EventPriority::control, actor(), "arrival",
                   [this, gen] { on_arrival(gen); });
}

void DeviceAgent::on_arrival(std::uint64_t gen) {
  if (gen != leg_gen_ || !leg_active_) return;
  leg_active_ = false;
  leg_from_ = leg_to_;
  switch (leg_purpose_) {
    case LegPurpose::to_task: {
      auto& task = tasks_.front();
      task.started = true;
      task.next_waypoint = 1;
      phase_ = DevicePhase::survey;
      log_event("survey_start", "task " + std::to_string(task.task_id));
      schedule_photo_timer();
      if (task.route.waypoints.size() < 2) {
        task_finished();
      } else {
        begin_leg(task.route.waypoints[1], LegPurpose::waypoint);
      }
      break;
    }
    case LegPurpose::waypoint: {
      auto& task = tasks_.front();
      task.next_waypoint++;
      if (task.done()) {
        task_finished();
      } else {
        begin_leg(task.route.waypoints[task.next_waypoint], LegPurpose::waypoint);
      }
      break;
    }
    case LegPurpose::returning:
      phase_ = DevicePhase::landed;
      log_event("landed", "battery=" + std::to_string(battery_));
      break;
  }
}

void DeviceAgent::task_finished() {
  photo_gen_++;  // photos stop between tasks
  SurveyTask done = tasks_.front();
  tasks_.erase(tasks_.begin());
  completed_tasks_.insert(done.task_id);
  log_event("survey_done", "task " + std::to_string(done.task_id));

  if (cfg_.platform == Platform::decentralized) send_peer_results();

  // Completion notice rides the shared channel like any other result.
  Transfer tr = channel_.submit(actor(), "controller", 200, TransferKind::result, engine_.now());
  std::uint64_t task_id = done.task_id;
  engine_.schedule(tr.delivery_time, EventPriority::network_delivery, actor(), "task_complete",
                   [this, task_id] {
                     if (controller_) controller_->on_task_complete(id_, task_id);
                   });
  begin_next_task();
}

// --- ticks: battery drain + heartbeat, once per second while powered ---

void DeviceAgent::schedule_tick() {
  if (tick_scheduled_) return;
  tick_scheduled_ = true;
  engine_.schedule_in(kUsPerS, EventPriority::heartbeat, actor(), "tick", [this] { tick(); });
}

void DeviceAgent::tick() {
  tick_scheduled_ = false;
  SimTime now = engine_.now();
  if (phase_ == DevicePhase::crashed || phase_ == DevicePhase::battery_dead) return;
  if (phase_airborne(phase_)) {
    double load = busy_fraction(now - kLoadWindow, now);
    double drain = (cfg_.devices.battery.hover_pct_per_s +
                    cfg_.devices.battery.compute_pct_per_s * load) *
                   drain_multiplier();
    battery_ = std::max(0.0, battery_ - drain);
    log_.battery_samples.push_back({now, id_, battery_});
    if (battery_ <= 0.0) {
      battery_dead();
      return;
    }
  }
  emit_heartbeat();
  if (phase_terminal(phase_) && controller_ && controller_->mission_over()) return;
  schedule_tick();
}

void DeviceAgent::emit_heartbeat() {
  SimTime now = engine_.now();
  if (dropout_from_ >= 0 && now >= dropout_from_ && now < dropout_until_) return;
  HeartbeatMsg msg;
  msg.device_id = id_;
  msg.sent = now;
  msg.battery_pct = battery_;
  msg.phase = static_cast<int>(phase_);
  double remaining = 0.0;
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    const auto& t = tasks_[i];
    msg.progress.push_back({t.task_id, t.completed_lanes(), i == 0});
    const auto& wps = t.route.waypoints;
    if (t.started && !t.done()) {
      remaining += distance(position(), wps[t.next_waypoint]);
      for (std::size_t w = t.next_waypoint + 1; w < wps.size(); ++w) {
        remaining += distance(wps[w - 1], wps[w]);
      }
    } else if (!t.started) {
      remaining += t.route.total_length();
    }
  }
  msg.remaining_route_m = remaining;
  double factor = std::max(kMinSpeedFactor, 1.0 - cfg_.devices.motion_degradation * cpu_load());
  msg.effective_speed_mps = cfg_.devices.speed_mps * speed_multiplier() * factor;

  Transfer tr = channel_.submit(actor(), "controller", cfg_.network.heartbeat_bytes,
                                TransferKind::heartbeat, now);
  engine_.schedule(tr.delivery_time, EventPriority::network_delivery, actor(), "heartbeat",
                   [this, msg] {
                     if (controller_) controller_->on_heartbeat(msg);
                   });
}

// --- photos ---

void DeviceAgent::schedule_photo_timer() {
  photo_gen_++;
  capture_photo();
  std::uint64_t gen = photo_gen_;
  engine_.schedule_in(from_s(cfg_.devices.photo_interval_s), EventPriority::control, actor(),
                      "photo_timer", [this, gen] { photo_timer(gen); });
}

void DeviceAgent::photo_timer(std::uint64_t gen) {
  if (gen != photo_gen_ || phase_ != DevicePhase::survey) return;
  capture_photo();
  engine_.schedule_in(from_s(cfg_.devices.photo_interval_s), EventPriority::control, actor(),
                      "photo_timer", [this, gen] { photo_timer(gen); });
}

void DeviceAgent::capture_photo() {
  if (phase_ != DevicePhase::survey) return;
  SimTime now = engine_.now();
  PhotoRecord photo;
  photo.photo_id = static_cast<std::int64_t>(id_) * 1000000 + next_photo_seq_++;
  photo.device_id = id_;
  photo.capture_time = now;
  photo.center = position();
  photo.footprint_w = footprint_w_;
  photo.footprint_h = footprint_h_;
  photo.size_bytes = cfg_.network.photo_bytes;
  photo.ground_truth_ids =
      world_.objects_in_footprint(photo.center, footprint_w_, footprint_h_, now);
  // Only the scenario's target kind counts; anything else is background.
  bool want_persons = cfg_.scenario == Scenario::people;
  std::erase_if(photo.ground_truth_ids,
                [&](int gid) { return world_.is_person(gid) != want_persons; });
  for (int gid : photo.ground_truth_ids) {
    if (world_.is_person(gid) && face_rng_.bernoulli(world_.config().face_visible_prob)) {
      photo.face_visible_ids.push_back(gid);
    }
  }
  log_.photos.push_back({photo, PhotoDisposition::in_flight, -1});
  photos_taken_++;

  if (cfg_.platform == Platform::centralized) {
    if (controller_) controller_->photo_in_flight();
    Transfer tr =
        channel_.submit(actor(), "cloud", photo.size_bytes, TransferKind::photo, now);
    engine_.schedule(tr.delivery_time, EventPriority::network_delivery, actor(),
                     "photo_delivery", [this, photo] {
                       auto& entry = log_.photo_entry(photo.photo_id);
                       entry.disposition = PhotoDisposition::delivered;
                       entry.resolved_time = engine_.now();
                       if (controller_) controller_->on_photo_delivered(photo);
                     });
  } else {
    enqueue_onboard(photo.photo_id);
  }
}

const PhotoRecord& DeviceAgent::photo_by_id(std::int64_t photo_id) const {
  return log_.photo_entry(photo_id).photo;
}

// --- on-board compute: single FIFO processor ---

void DeviceAgent::enqueue_onboard(std::int64_t photo_id) {
  compute_queue_.push_back(photo_id);
  if (!compute_busy_) start_onboard();
}

void DeviceAgent::start_onboard() {
  if (compute_queue_.empty()) return;
  compute_busy_ = true;
  std::int64_t pid = compute_queue_.front();
  double ms = model_.latency_ms.sample(compute_rng_);
  SimTime now = engine_.now();
  SimTime end = now + from_ms(ms);
  add_busy(now, end);
  log_.onboard_tasks.push_back(
      {now, end, id_, cfg_.platform == Platform::hivemind ? "filter" : "recognition", pid});
  engine_.schedule(end, EventPriority::compute_completion, actor(), "onboard_done",
                   [this, pid] { onboard_done(pid); });
}

void DeviceAgent::onboard_done(std::int64_t photo_id) {
  if (phase_ == DevicePhase::crashed || phase_ == DevicePhase::battery_dead) return;
  if (compute_queue_.empty() || compute_queue_.front() != photo_id) return;  // stale
  compute_queue_.pop_front();
  compute_busy_ = false;

  const PhotoRecord& photo = photo_by_id(photo_id);
  DetectionOutcome outcome = world_.sample_detection(model_, photo, detect_rng_);
  auto& entry = log_.photo_entry(photo_id);

  if (cfg_.platform == Platform::hivemind) {
    if (outcome.flagged) {
      if (controller_) controller_->photo_in_flight();
      Transfer tr = channel_.submit(actor(), "cloud", photo.size_bytes, TransferKind::photo,
                                    engine_.now());
      PhotoRecord copy = photo;
      engine_.schedule(tr.delivery_time, EventPriority::network_delivery, actor(),
                       "photo_delivery", [this, copy] {
                         auto& e = log_.photo_entry(copy.photo_id);
                         e.disposition = PhotoDisposition::delivered;
                         e.resolved_time = engine_.now();
                         if (controller_) controller_->on_photo_delivered(copy);
                       });
    } else {
      entry.disposition = PhotoDisposition::stored;
      entry.resolved_time = engine_.now();
      local_store_.push_back(photo_id);
    }
  } else {  // decentralized: full on-board recognition, results stay local
    if (outcome.flagged) {
      if (outcome.false_positive) {
        local_results_.push_back(
            {-1, photo.center, photo_id, id_, false, engine_.now()});
      }
      for (int gid : outcome.detected_ids) {
        bool face = std::find(photo.face_visible_ids.begin(), photo.face_visible_ids.end(),
                              gid) != photo.face_visible_ids.end();
        local_results_.push_back({gid, world_.object_position(gid, photo.capture_time),
                                  photo_id, id_, face, engine_.now()});
      }
    }
    entry.disposition = PhotoDisposition::stored;
    entry.resolved_time = engine_.now();
    local_store_.push_back(photo_id);
  }

  if (!compute_queue_.empty()) start_onboard();
}

void DeviceAgent::add_busy(SimTime from, SimTime to) {
  busy_intervals_.emplace_back(from, to);
  SimTime horizon = engine_.now() - 2 * kLoadWindow;
  while (!busy_intervals_.empty() && busy_intervals_.front().second < horizon) {
    busy_intervals_.pop_front();
  }
}

double DeviceAgent::busy_fraction(SimTime from, SimTime to) const {
  if (to <= from) return 0.0;
  SimTime busy = 0;
  for (const auto& [a, b] : busy_intervals_) {
    busy += std::max<SimTime>(0, std::min(b, to) - std::max(a, from));
  }
  double f = static_cast<double>(busy) / static_cast<double>(to - from);
  return std::clamp(f, 0.0, 1.0);
}

double DeviceAgent::cpu_load() const {
  return busy_fraction(engine_.now() - kLoadWindow, engine_.now());
}

// --- obstacles ---

void DeviceAgent::schedule_obstacle() {
  double rate = cfg_.devices.obstacle.rate_per_s;
  if (rate <= 0.0) return;
  int nearby = 0;
  if (peers_) {
    Point here = position();
    for (const auto& peer : *peers_) {
      if (peer.get() == this || !phase_airborne(peer->phase())) continue;
      if (distance(here, peer->position()) <= cfg_.devices.obstacle.density_radius_m) nearby++;
    }
  }
  if (nearby > cfg_.devices.obstacle.density_limit) rate *= 2.0;
  std::uint64_t gen = obstacle_gen_;
  engine_.schedule_in(from_s(obstacle_rng_.exponential(1.0 / rate)), EventPriority::control,
                      actor(), "obstacle", [this, gen] { obstacle_event(gen); });
}

void DeviceAgent::obstacle_event(std::uint64_t gen) {
  if (gen != obstacle_gen_ || phase_terminal(phase_)) return;
  if (phase_airborne(phase_) && leg_active_) {
    double load = cpu_load();
    double ms = avoid_spec_.sample(obstacle_rng_);
    SimTime now = engine_.now();
    add_busy(now, now + from_ms(ms));
    log_.onboard_tasks.push_back({now, now + from_ms(ms), id_, "avoidance", -1});
    avoidance_events_++;
    avoidance_delay_ms_ += ms;

    // The avoidance maneuver pauses progress along the current leg.
    leg_t1_ += from_ms(ms);
    leg_gen_++;
    std::uint64_t leg_gen = leg_gen_;
    engine_.schedule(leg_t1_, EventPriority::control, actor(), "arrival",
                     [this, leg_gen] { on_arrival(leg_gen); });

    double hazard = cfg_.devices.obstacle.crash_h0 *
                    std::max(0.0, load - cfg_.devices.obstacle.crash_load_threshold);
    if (hazard > 0.0 && obstacle_rng_.bernoulli(hazard)) {
      crash("obstacle_collision");
      return;
    }
  }
  schedule_obstacle();
}

// --- absorbing states ---

void DeviceAgent::halt_motion_and_timers() {
  leg_active_ = false;
  leg_gen_++;
  photo_gen_++;
  obstacle_gen_++;
}

void DeviceAgent::crash(const std::string& cause) {
  leg_from_ = leg_to_ = position();
  halt_motion_and_timers();
  phase_ = DevicePhase::crashed;
  compute_busy_ = false;
  // Everything on local flash goes down with the airframe.
  for (std::int64_t pid : local_store_) {
    auto& e = log_.photo_entry(pid);
    e.disposition = PhotoDisposition::lost;
    e.resolved_time = engine_.now();
  }
  for (std::int64_t pid : compute_queue_) {
    auto& e = log_.photo_entry(pid);
    e.disposition = PhotoDisposition::lost;
    e.resolved_time = engine_.now();
  }
  local_store_.clear();
  compute_queue_.clear();
  local_results_.clear();
  log_event("crash", cause);
}

void DeviceAgent::battery_dead() {
  leg_from_ = leg_to_ = position();
  halt_motion_and_timers();
  phase_ = DevicePhase::battery_dead;
  compute_busy_ = false;
  // Forced landing: flash survives, unprocessed photos stay archived.
  for (std::int64_t pid : compute_queue_) {
    auto& e = log_.photo_entry(pid);
    e.disposition = PhotoDisposition::stored;
    e.resolved_time = engine_.now();
    local_store_.push_back(pid);
  }
  compute_queue_.clear();
  log_event("battery_dead", "");
}

// --- decentralized peer exchange ---

void DeviceAgent::send_peer_results() {
  if (!controller_ || local_results_.empty()) return;
  // Each unordered pair exchanges in one direction only: the higher-id side
  // sends, the lower-id side discards its duplicates on receipt.
  std::vector<int> neighbors;
  for (int nb : controller_->border_neighbors(id_)) {
    if (nb < id_) neighbors.push_back(nb);
  }
  if (neighbors.empty()) return;

  // Only results gathered since the previous exchange go on the wire; the
  // earlier ones have already been shipped to every border neighbor.
  std::vector<LocalDetection> snapshot;
  for (const auto& d : local_results_) {
    if (exchanged_.insert({d.photo_id, d.object_id}).second) snapshot.push_back(d);
  }
  if (snapshot.empty()) return;

  std::int64_t bytes = 0;
  if (cfg_.scenario == Scenario::items) {
    bytes = cfg_.network.coords_bytes_per_item *
            static_cast<std::int64_t>(snapshot.size());
  } else {
    std::set<std::int64_t> photo_ids;
    for (const auto& d : snapshot) photo_ids.insert(d.photo_id);
    bytes = cfg_.network.photo_bytes * static_cast<std::int64_t>(photo_ids.size());
  }

  for (int nb : neighbors) {
    if (!peers_ || nb < 0 || nb >= static_cast<int>(peers_->size())) continue;
    DeviceAgent* peer = (*peers_)[static_cast<std::size_t>(nb)].get();
    controller_->exchange_started();
    Transfer tr = channel_.submit(actor(), peer->actor(), bytes, TransferKind::peer_exchange,
                                  engine_.now());
    int src = id_;
    engine_.schedule(tr.delivery_time, EventPriority::network_delivery, actor(),
                     "peer_results", [this, peer, src, snapshot] {
                       peer->on_peer_results(src, snapshot);
                       controller_->exchange_finished();
                     });
  }
  log_event("peer_exchange", std::to_string(neighbors.size()) + " neighbors, " +
                                 std::to_string(bytes) + "B each");
}

}  // namespace hive
