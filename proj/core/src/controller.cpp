#include <sstream>
#include "hivemind/controller.hpp"

#include <algorithm>
#include <cmath>

#include "hivemind/planner.hpp"

namespace hive {

namespace {

Footprint effective_footprint(const PlannerBlockConfig& p) {
  if (p.footprint_override_w_m > 0.0 && p.footprint_override_h_m > 0.0) {
    return {p.footprint_override_w_m, p.footprint_override_h_m};
  }
  return footprint_from_fov(p.altitude_m, p.fov_diag_deg, p.aspect_w, p.aspect_h);
}

constexpr int kMaxRecipients = 8;

}  // namespace

const char* assignment_status_name(AssignmentStatus s) {
  switch (s) {
    case AssignmentStatus::pending: return "pending";
    case AssignmentStatus::active: return "active";
    case AssignmentStatus::surveyed: return "surveyed";
    case AssignmentStatus::reassigned: return "reassigned";
    case AssignmentStatus::reverted: return "reverted";
  }
  return "?";
}

Controller::Controller(Engine& engine, const World& world, Channel& channel, Cluster* cluster,
                       const ExperimentConfig& cfg, RunLog& log,
                       std::vector<std::unique_ptr<DeviceAgent>>& devices,
                       std::uint64_t master_seed, LearningState carryover)
    : engine_(engine),
      world_(world),
      channel_(channel),
      cluster_(cluster),
      cfg_(cfg),
      log_(log),
      devices_(devices),
      fault_rng_(master_seed, "fault-injection"),
      footprint_(effective_footprint(cfg.planner)),
      learning_(std::move(carryover)) {
  if (cluster_) {
    cluster_->on_job_complete = [this](const Job& job) { job_completed(job); };
  }
  global_model_ = base_onboard_model();
  global_model_.apply_feedback(learning_.pooled_fp, learning_.pooled_fn);
}

DetectionModel Controller::base_onboard_model() const {
  bool items = cfg_.scenario == Scenario::items;
  switch (cfg_.platform) {
    case Platform::hivemind:
      return (items ? cfg_.devices.filter_items : cfg_.devices.filter_people).to_model();
    case Platform::decentralized:
      return (items ? cfg_.devices.recognize_items : cfg_.devices.recognize_people).to_model();
    case Platform::centralized:
      return {};
  }
  return {};
}

void Controller::log_control(const std::string& event, const std::string& detail) {
  log_.control_events.push_back({engine_.now(), event, detail});
}

bool Controller::device_airborne(int device_id) const {
  return phase_airborne(devices_[static_cast<std::size_t>(device_id)]->phase());
}

void Controller::start() {
  // Carry model state from a previous mission onto the devices before
  // anything flies; this is ground provisioning, not an in-air redeploy.
  bool carried = learning_.pooled_fp > 0 || learning_.pooled_fn > 0 || !learning_.per_device.empty();
  if (carried && cfg_.platform != Platform::centralized) {
    for (auto& dev : devices_) {
      DetectionModel m = base_onboard_model();
      if (cfg_.controller.learning.scope == "global") {
        m.apply_feedback(learning_.pooled_fp, learning_.pooled_fn);
      } else {
        auto it = learning_.per_device.find(dev->id());
        if (it != learning_.per_device.end()) m.apply_feedback(it->second.first, it->second.second);
      }
      device_models_[dev->id()] = m;
      dev->on_model_update(m);
    }
  }

  initial_assignment();
  schedule_forced_failures();
  if (cfg_.faults.dropout_device >= 0 &&
      cfg_.faults.dropout_device < static_cast<int>(devices_.size())) {
    devices_[static_cast<std::size_t>(cfg_.faults.dropout_device)]->set_heartbeat_dropout(
        from_s(cfg_.faults.dropout_t_s),
        from_s(cfg_.faults.dropout_t_s + cfg_.faults.dropout_duration_s));
  }

  engine_.schedule_in(from_s(cfg_.controller.heartbeat_check_interval_s), EventPriority::control,
                      "controller", "heartbeat_check", [this] { heartbeat_check(); });
  engine_.schedule_in(from_s(cfg_.controller.rebalance_interval_s), EventPriority::control,
                      "controller", "rebalance_check", [this] { rebalance_check(); });
  if (cfg_.controller.learning.online_retraining && cfg_.platform != Platform::centralized) {
    engine_.schedule_in(from_s(cfg_.controller.learning.retrain_interval_s),
                        EventPriority::control, "controller", "retrain",
                        [this] { retrain_tick(); });
  }
}

void Controller::send_command(int device_id, const std::string& what,
                              std::function<void(DeviceAgent&)> apply) {
  Transfer tr = channel_.submit("controller", "drone-" + std::to_string(device_id),
                                cfg_.network.command_bytes, TransferKind::command, engine_.now());
  engine_.schedule(tr.delivery_time, EventPriority::network_delivery, "controller", what,
                   [this, device_id, apply = std::move(apply)] {
                     apply(*devices_[static_cast<std::size_t>(device_id)]);
                   });
}

void Controller::initial_assignment() {
  if (devices_.empty()) throw SimError("initial assignment: no devices");
  auto regions = partition_area(world_.config().field, static_cast<int>(devices_.size()));
  for (const auto& region : regions) {
    AssignmentEntry entry;
    entry.task_id = new_task_id();
    entry.device_id = region.owner;
    entry.rect = region.rect;
    entry.route = plan_route(region.rect, footprint_, cfg_.planner.lane_overlap,
                             cfg_.devices.takeoff_point);
    validate_photo_spacing(cfg_.devices.speed_mps, cfg_.devices.photo_interval_s, footprint_);
    table_[entry.task_id] = entry;
    open_tasks_++;
    ledger_[region.owner];  // ledger row from t=0

    SurveyTask task;
    task.task_id = entry.task_id;
    task.rect = entry.rect;
    task.route = entry.route;
    double delay = region.owner * cfg_.devices.stagger_s;
    send_command(region.owner, "assign",
                 [task, delay](DeviceAgent& d) { d.on_mission_command(task, delay); });
  }
  log_control("initial_assignment", std::to_string(devices_.size()) + " regions");
}

void Controller::schedule_forced_failures() {
  int k = cfg_.faults.forced_failures;
  if (k <= 0) return;
  double t_est = 0.0;
  for (const auto& [id, entry] : table_) {
    if (entry.route.waypoints.empty()) continue;
    double transit = distance(cfg_.devices.takeoff_point, entry.route.waypoints.front()) /
                     cfg_.devices.speed_mps;
    double survey = entry.route.total_length() / cfg_.devices.speed_mps;
    t_est = std::max(t_est, cfg_.devices.takeoff_s + transit + survey);
  }
  std::vector<int> victims;
  int n = static_cast<int>(devices_.size());
  while (static_cast<int>(victims.size()) < std::min(k, n)) {
    int d = static_cast<int>(fault_rng_.uniform_int(static_cast<std::uint64_t>(n)));
    if (std::find(victims.begin(), victims.end(), d) == victims.end()) victims.push_back(d);
  }
  for (int d : victims) {
    double t = (cfg_.faults.window_lo +
                fault_rng_.uniform() * (cfg_.faults.window_hi - cfg_.faults.window_lo)) *
               t_est;
    engine_.schedule(from_s(t), EventPriority::control, "fault-injector", "forced_failure",
                     [this, d] {
                       log_control("forced_failure", "drone-" + std::to_string(d));
                       devices_[static_cast<std::size_t>(d)]->force_failure();
                     });
  }
}

// --- heartbeats & failure handling ---

void Controller::on_heartbeat(const HeartbeatMsg& msg) {
  auto& row = ledger_[msg.device_id];
  row.last_heard = engine_.now();
  row.contacted = true;
  row.last_msg = msg;

  for (const auto& p : msg.progress) {
    auto it = table_.find(p.task_id);
    if (it == table_.end()) continue;
    auto& entry = it->second;
    if (entry.status != AssignmentStatus::pending && entry.status != AssignmentStatus::active)
      continue;
    entry.reported_lanes = std::max(entry.reported_lanes, p.completed_lanes);
    if (p.current || p.completed_lanes > 0) {
      entry.status = AssignmentStatus::active;
      if (entry.parent_task != 0) entry.strip_started = true;
    }
  }

  if (row.failed) try_revert(msg.device_id);
}

void Controller::heartbeat_check() {
  if (mission_over_) return;
  SimTime now = engine_.now();
  SimTime timeout = from_s(cfg_.controller.heartbeat_timeout_s);
  for (auto& [id, row] : ledger_) {
    if (row.failed) continue;
    if (now - row.last_heard >= timeout) declare_failure(id);
  }
  check_mission_over();
  if (!mission_over_) {
    engine_.schedule_in(from_s(cfg_.controller.heartbeat_check_interval_s),
                        EventPriority::control, "controller", "heartbeat_check",
                        [this] { heartbeat_check(); });
  }
}

void Controller::declare_failure(int device_id) {
  ledger_[device_id].failed = true;
  failures_declared_++;
  log_control("failure_declared", "drone-" + std::to_string(device_id));
  handle_failure(device_id);
}

std::vector<int> Controller::eligible_recipients(const Rect& region, int exclude_device) const {
  double threshold = cfg_.planner.rebalance_battery_threshold_pct;
  auto eligible = [&](int d) {
    if (d == exclude_device) return false;
    auto it = ledger_.find(d);
    if (it != ledger_.end() && it->second.failed) return false;
    if (!device_airborne(d)) return false;
    double battery = (it != ledger_.end() && it->second.contacted)
                         ? it->second.last_msg.battery_pct
                         : 100.0;
    return battery >= threshold;
  };

  // Rank eligible devices by centroid distance to the orphaned region and
  // take the nearest ones. Border neighbors sort first naturally; widening
  // the pool beyond them keeps any single recipient from serializing the
  // extra area, and the share computation charges each one its travel time.
  Point c = region.center();
  std::map<int, double> nearest;
  for (const auto& [id, entry] : table_) {
    if (entry.device_id == exclude_device) continue;
    if (entry.status != AssignmentStatus::active && entry.status != AssignmentStatus::pending)
      continue;
    if (entry.rect.area() <= 0.0 || !eligible(entry.device_id)) continue;
    double dist = distance(c, entry.rect.center());
    auto [it, inserted] = nearest.emplace(entry.device_id, dist);
    if (!inserted && dist < it->second) it->second = dist;
  }
  std::vector<std::pair<double, int>> ranked;
  for (const auto& [dev, dist] : nearest) ranked.emplace_back(dist, dev);
  std::sort(ranked.begin(), ranked.end());
  std::vector<int> out;
  for (const auto& [dist, dev] : ranked) {
    out.push_back(dev);
    if (static_cast<int>(out.size()) >= kMaxRecipients) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

Route Controller::route_for(const Rect& rect, int device_id) const {
  // Start corner nearest the recipient's current area of operations.
  Point ref = cfg_.devices.takeoff_point;
  for (const auto& [id, entry] : table_) {
    if (entry.device_id == device_id &&
        (entry.status == AssignmentStatus::active || entry.status == AssignmentStatus::surveyed)) {
      ref = entry.rect.center();
      break;
    }
  }
  return plan_route(rect, footprint_, cfg_.planner.lane_overlap, ref);
}

std::vector<SurveyTask> build_desired_tasks(const std::map<std::uint64_t, AssignmentEntry>& table,
                                            int device_id) {
  std::vector<SurveyTask> out;
  std::vector<const AssignmentEntry*> live;
  for (const auto& [id, entry] : table) {
    if (entry.device_id != device_id) continue;
    if (entry.status == AssignmentStatus::active || entry.status == AssignmentStatus::pending) {
      live.push_back(&entry);
    }
  }
  std::sort(live.begin(), live.end(), [](const AssignmentEntry* a, const AssignmentEntry* b) {
    if ((a->status == AssignmentStatus::active) != (b->status == AssignmentStatus::active)) {
      return a->status == AssignmentStatus::active;
    }
    return a->task_id < b->task_id;
  });
  for (const auto* e : live) {
    SurveyTask t;
    t.task_id = e->task_id;
    t.rect = e->rect;
    t.route = e->route;
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::pair<int, double>> Controller::balanced_shares(
    const Rect& remainder, const std::vector<int>& recipients) const {
  std::vector<std::pair<int, double>> shares;
  if (recipients.empty()) return shares;
  double speed = cfg_.devices.speed_mps;
  // Nominal survey time of the whole remainder, at one footprint-width lane
  // per pass. Only the scale matters; it sets the water-filling level.
  double lane_w = footprint_.width;
  double total_s = remainder.area() / (std::max(lane_w, 1e-9) * speed);

  // Cost of a recipient = its own projected remaining work plus travel to the
  // strip. Water-filling tops recipients up to a common projected finish, so
  // devices with slack absorb more area and the makespan grows least.
  struct Cand {
    int id;
    double cost;
  };
  std::vector<Cand> cands;
  for (int r : recipients) {
    double own_s = 0.0;
    auto lit = ledger_.find(r);
    if (lit != ledger_.end() && lit->second.contacted) {
      const auto& m = lit->second.last_msg;
      if (m.remaining_route_m > 0.0 && m.effective_speed_mps > 0.0) {
        own_s = m.remaining_route_m / m.effective_speed_mps;
      }
    }
    const Rect* rrect = nullptr;
    for (const auto& [tid, e] : table_) {
      if (e.device_id == r &&
          (e.status == AssignmentStatus::active || e.status == AssignmentStatus::pending)) {
        rrect = &e.rect;
        break;
      }
    }
    Point from = rrect ? rrect->center() : cfg_.devices.takeoff_point;
    double travel_s = distance(from, remainder.center()) / speed;
    cands.push_back({r, own_s + travel_s});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.id < b.id;
  });

  // Find the level L and the set of recipients below it.
  std::size_t k = cands.size();
  double level = 0.0;
  double prefix = 0.0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    prefix += cands[i].cost;
    double l = (prefix + total_s) / static_cast<double>(i + 1);
    if (i + 1 == cands.size() || l <= cands[i + 1].cost) {
      k = i + 1;
      level = l;
      break;
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    shares.emplace_back(cands[i].id, std::max(0.0, level - cands[i].cost));
  }
  // Degenerate case (all shares ~0): fall back to an equal split.
  double sum = 0.0;
  for (const auto& [id, s] : shares) sum += s;
  if (sum <= 1e-9) {
    shares.clear();
    for (int r : recipients) shares.emplace_back(r, 1.0);
  }
  return shares;
}

void Controller::assign_strips(const Rect& remainder, const std::vector<int>& recipients,
                               std::uint64_t parent_task, bool record_for_revert,
                               int failed_device) {
  auto strips = split_remainder_weighted(remainder, balanced_shares(remainder, recipients));
  FailureRecord* rec =
      record_for_revert ? &open_failures_[failed_device] : nullptr;
  std::set<int> touched;
  for (const auto& strip : strips) {
    AssignmentEntry entry;
    entry.task_id = new_task_id();
    entry.device_id = strip.owner;
    entry.rect = strip.rect;
    entry.route = route_for(strip.rect, strip.owner);
    entry.parent_task = parent_task;
    table_[entry.task_id] = entry;
    open_tasks_++;
    touched.insert(strip.owner);
    if (rec) rec->strip_ids.push_back(entry.task_id);
  }
  for (int d : touched) {
    auto desired = build_desired_tasks(table_, d);
    send_command(d, "replace_tasks",
                 [desired](DeviceAgent& dev) { dev.on_replace_tasks(desired); });
  }
}

void Controller::handle_failure(int device_id) {
  std::vector<std::uint64_t> live_ids;
  for (auto& [id, entry] : table_) {
    if (entry.device_id == device_id &&
        (entry.status == AssignmentStatus::active || entry.status == AssignmentStatus::pending)) {
      live_ids.push_back(id);
    }
  }
  if (live_ids.empty()) {
    log_control("repartition", "drone-" + std::to_string(device_id) + ": empty remainder");
    return;
  }

  bool any = false;
  for (std::uint64_t id : live_ids) {
    auto& entry = table_[id];
    Rect remainder = remainder_slab(entry.rect, entry.route.lane_spacing,
                                    entry.route.scan_right, entry.reported_lanes);
    auto recipients = eligible_recipients(entry.rect, device_id);
    if (recipients.empty()) {
      scenario_failed_ = true;
      log_control("scenario_failed",
                  "no eligible recipient for task " + std::to_string(id));
      continue;
    }
    auto& rec = open_failures_[device_id];
    rec.saved_entries.push_back(entry);
    entry.rect = surveyed_slab(entry.rect, entry.route.lane_spacing, entry.route.scan_right,
                               entry.reported_lanes);
    entry.status = AssignmentStatus::reassigned;
    open_tasks_--;
    if (remainder.area() > 0.0) {
      assign_strips(remainder, recipients, id, true, device_id);
    }
    any = true;
  }
  if (any) {
    audit_tiling_now("repartition");
    log_control("repartition", "drone-" + std::to_string(device_id) + " remainder split");
    check_completion();
  }
}

void Controller::try_revert(int device_id) {
  auto& row = ledger_[device_id];
  auto it = open_failures_.find(device_id);
  if (it == open_failures_.end()) {
    // Nothing revertible: the device stands down and returns home.
    send_command(device_id, "stand_down",
                 [](DeviceAgent& d) { d.on_replace_tasks({}); });
    row.failed = false;
    log_control("revert_refused", "drone-" + std::to_string(device_id) + ": no open record");
    return;
  }
  bool any_started = false;
  for (std::uint64_t sid : it->second.strip_ids) {
    auto sit = table_.find(sid);
    // A strip blocks the revert once a recipient has begun it, finished it,
    // or — after a second failure — had it re-split into strips of its own.
    // Restoring the parent under any of those would double-cover the area.
    if (sit != table_.end() &&
        (sit->second.strip_started || sit->second.status != AssignmentStatus::pending)) {
      any_started = true;
    }
  }
  if (any_started) {
    send_command(device_id, "stand_down",
                 [](DeviceAgent& d) { d.on_replace_tasks({}); });
    row.failed = false;
    log_control("revert_refused",
                "drone-" + std::to_string(device_id) + ": reassignment already underway");
    open_failures_.erase(it);
    return;
  }

  // Revert: drop the strips, restore the saved rows, notify the recipients.
  std::set<int> touched;
  for (std::uint64_t sid : it->second.strip_ids) {
    auto sit = table_.find(sid);
    if (sit == table_.end()) continue;
    touched.insert(sit->second.device_id);
    open_tasks_--;
    table_.erase(sit);
  }
  for (const auto& saved : it->second.saved_entries) {
    table_[saved.task_id] = saved;
    open_tasks_++;
  }
  open_failures_.erase(it);
  row.failed = false;
  reverts_++;
  for (int d : touched) {
    auto desired = build_desired_tasks(table_, d);
    send_command(d, "replace_tasks",
                 [desired](DeviceAgent& dev) { dev.on_replace_tasks(desired); });
  }
  audit_tiling_now("revert");
  log_control("revert", "drone-" + std::to_string(device_id) + " back in service");
}

// --- rebalancing ---

void Controller::rebalance_check() {
  if (mission_over_) return;
  double threshold = cfg_.planner.rebalance_battery_threshold_pct;

  // Battery rule: below-threshold devices shed area proportional to deficit.
  for (auto& [id, row] : ledger_) {
    if (row.failed || row.shed_latched || !row.contacted || !device_airborne(id)) continue;
    double battery = row.last_msg.battery_pct;
    if (battery < threshold) {
      double frac = std::clamp((threshold - battery) / threshold, 0.1, 0.8);
      shed_area(id, frac, "battery " + std::to_string(battery) + "%");
    }
  }

  // Progress rule: projected completion lagging the swarm median.
  std::vector<std::pair<int, double>> projections;
  for (auto& [id, row] : ledger_) {
    if (row.failed || !row.contacted || !device_airborne(id)) continue;
    const auto& m = row.last_msg;
    if (m.remaining_route_m <= 0.0 || m.effective_speed_mps <= 0.0) continue;
    projections.emplace_back(id, m.remaining_route_m / m.effective_speed_mps);
  }
  if (projections.size() >= 3) {
    std::vector<double> values;
    for (auto& [id, p] : projections) values.push_back(p);
    std::nth_element(values.begin(), values.begin() + values.size() / 2, values.end());
    double median = values[values.size() / 2];
    for (auto& [id, proj] : projections) {
      auto& row = ledger_[id];
      if (row.shed_latched) continue;
      if (median > 0.0 && proj > (1.0 + cfg_.controller.progress_lag_threshold) * median) {
        double frac = std::clamp((proj - median) / proj, 0.1, 0.8);
        shed_area(id, frac,
                  "projected lag " + std::to_string(proj) + "s vs median " +
                      std::to_string(median) + "s",
                  proj);
      }
    }
  }

  engine_.schedule_in(from_s(cfg_.controller.rebalance_interval_s), EventPriority::control,
                      "controller", "rebalance_check", [this] { rebalance_check(); });
}

void Controller::shed_area(int device_id, double fraction, const std::string& why,
                           double lagger_proj_s) {
  // Shed from the current task's far end, at lane granularity, keeping the
  // in-progress lane plus one lane of heartbeat-staleness margin so already
  // surveyed ground is never handed out.
  AssignmentEntry* current = nullptr;
  for (auto& [id, entry] : table_) {
    if (entry.device_id == device_id && entry.status == AssignmentStatus::active) {
      current = &entry;
      break;
    }
  }
  if (!current) return;
  int total = static_cast<int>(current->route.waypoints.size() / 2);
  int shedable = total - current->reported_lanes - 2;
  if (shedable < 1) return;
  int shed = std::clamp(static_cast<int>(std::lround(fraction * shedable)), 1, shedable);
  int kept = total - shed;

  Rect shed_rect = remainder_slab(current->rect, current->route.lane_spacing,
                                  current->route.scan_right, kept);
  auto recipients = eligible_recipients(current->rect, device_id);

  if (lagger_proj_s >= 0.0 && !recipients.empty()) {
    // Keep only neighbors projected to finish the strip before the laggard
    // would reach the end of its own route; nominal speed approximates both
    // the travel and the strip legs.
    double strip_s = shed_rect.area() / (current->route.lane_spacing * cfg_.devices.speed_mps);
    Point strip_c = shed_rect.center();
    std::vector<int> beneficial;
    for (int r : recipients) {
      const auto& m = ledger_.at(r).last_msg;
      double own_s = m.effective_speed_mps > 0.0 && m.remaining_route_m > 0.0
                         ? m.remaining_route_m / m.effective_speed_mps
                         : 0.0;
      const Rect* rrect = nullptr;
      for (const auto& [tid, e] : table_) {
        if (e.device_id == r &&
            (e.status == AssignmentStatus::active || e.status == AssignmentStatus::pending)) {
          rrect = &e.rect;
          break;
        }
      }
      Point from = rrect ? rrect->center() : cfg_.devices.takeoff_point;
      double travel_s = distance(from, strip_c) / cfg_.devices.speed_mps;
      if (own_s + travel_s + strip_s < lagger_proj_s) beneficial.push_back(r);
    }
    recipients = std::move(beneficial);
  }

  if (recipients.empty()) {
    log_control("rebalance_noop",
                "drone-" + std::to_string(device_id) + ": no eligible neighbor (" + why + ")");
    return;
  }

  current->rect = surveyed_slab(current->rect, current->route.lane_spacing,
                                current->route.scan_right, kept);
  current->route.waypoints.resize(static_cast<std::size_t>(2 * kept));
  ledger_[device_id].shed_latched = true;
  rebalances_++;
  std::uint64_t parent = current->task_id;
  assign_strips(shed_rect, recipients, parent, false, device_id);
  // assign_strips may rehash table_; re-read nothing through `current` below.
  auto desired = build_desired_tasks(table_, device_id);
  send_command(device_id, "replace_tasks",
               [desired](DeviceAgent& dev) { dev.on_replace_tasks(desired); });
  audit_tiling_now("rebalance");
  log_control("rebalance", "drone-" + std::to_string(device_id) + ": " + why);
}

// --- cloud pipeline ---

void Controller::photo_in_flight() { outstanding_photos_++; }

void Controller::on_photo_delivered(const PhotoRecord& photo) {
  outstanding_photos_--;
  if (!cluster_) {
    verify_photo(photo);
    check_completion();
    return;
  }
  JobKind kind = cfg_.scenario == Scenario::items ? JobKind::item_recognition
                                                  : JobKind::people_recognition;
  std::uint64_t job = cluster_->submit_job(kind, photo.device_id, photo.photo_id);
  jobs_in_flight_[job] = photo;
}

void Controller::job_completed(const Job& job) {
  auto it = jobs_in_flight_.find(job.job_id);
  if (it == jobs_in_flight_.end()) return;  // retraining etc.
  PhotoRecord photo = it->second;
  jobs_in_flight_.erase(it);
  verify_photo(photo);
  check_completion();
}

void Controller::verify_photo(const PhotoRecord& photo) {
  if (photo.ground_truth_ids.empty()) {
    // Only photos flagged by an on-board filter count as confirmed false
    // positives; on the raw-upload platform an empty photo is simply empty.
    if (cfg_.platform == Platform::hivemind) {
      confirmed_fp_++;
      log_.registrations.push_back(
          {engine_.now(), "false_positive", -1, photo.photo_id, photo.device_id});
      if (cfg_.controller.learning.online_retraining) {
        ledger_[photo.device_id].pending_fp_feedback++;
      }
    }
    return;
  }
  for (int gid : photo.ground_truth_ids) {
    if (world_.is_person(gid)) {
      bool face = std::find(photo.face_visible_ids.begin(), photo.face_visible_ids.end(),
                            gid) != photo.face_visible_ids.end();
      register_person(gid, face, photo.photo_id, photo.device_id);
    } else {
      register_item(gid, world_.object_position(gid, photo.capture_time), photo.photo_id,
                    photo.device_id);
    }
  }
}

std::string Controller::register_item(int object_id, Point position, std::int64_t photo_id,
                                      int device_id) {
  for (const auto& existing : items_) {
    if (distance(existing.position, position) <= cfg_.controller.dedup_radius_m) {
      duplicates_++;
      log_.registrations.push_back({engine_.now(), "duplicate", object_id, photo_id, device_id});
      return "duplicate";
    }
  }
  items_.push_back({object_id, position});
  log_.registrations.push_back({engine_.now(), "unique", object_id, photo_id, device_id});
  return "unique";
}

std::string Controller::register_person(int object_id, bool face_visible, std::int64_t photo_id,
                                        int device_id) {
  if (!face_visible) {
    log_.registrations.push_back({engine_.now(), "discarded", object_id, photo_id, device_id});
    return "discarded";
  }
  if (persons_.count(object_id)) {
    duplicates_++;
    log_.registrations.push_back({engine_.now(), "duplicate", object_id, photo_id, device_id});
    return "duplicate";
  }
  persons_.insert(object_id);
  log_.registrations.push_back({engine_.now(), "unique", object_id, photo_id, device_id});
  return "unique";
}

// --- learning ---

void Controller::retrain_tick() {
  if (mission_over_) return;
  std::map<int, std::pair<int, int>> batch;
  for (auto& [id, row] : ledger_) {
    if (row.pending_fp_feedback > 0) {
      batch[id] = {row.pending_fp_feedback, 0};
      row.pending_fp_feedback = 0;
    }
  }
  if (!batch.empty()) apply_retraining(batch);
  engine_.schedule_in(from_s(cfg_.controller.learning.retrain_interval_s), EventPriority::control,
                      "controller", "retrain", [this] { retrain_tick(); });
}

void Controller::apply_retraining(const std::map<int, std::pair<int, int>>& batch) {
  if (batch.empty()) return;
  retrain_rounds_++;
  if (cluster_) cluster_->submit_job(JobKind::retraining, -1, -1);

  std::vector<std::pair<int, DetectionModel>> deploys;
  if (cfg_.controller.learning.scope == "global") {
    for (const auto& [d, fb] : batch) {
      learning_.pooled_fp += fb.first;
      learning_.pooled_fn += fb.second;
    }
    global_model_ = base_onboard_model();
    global_model_.apply_feedback(learning_.pooled_fp, learning_.pooled_fn);
    for (const auto& dev : devices_) {
      if (!dev->powered()) continue;
      deploys.emplace_back(dev->id(), global_model_);
    }
  } else {
    for (const auto& [d, fb] : batch) {
      auto& counts = learning_.per_device[d];
      counts.first += fb.first;
      counts.second += fb.second;
      DetectionModel m = base_onboard_model();
      m.apply_feedback(counts.first, counts.second);
      device_models_[d] = m;
      if (devices_[static_cast<std::size_t>(d)]->powered()) deploys.emplace_back(d, m);
    }
  }

  for (auto& [d, model] : deploys) {
    Transfer tr = channel_.submit("controller", "drone-" + std::to_string(d),
                                  cfg_.network.model_redeploy_bytes, TransferKind::model_redeploy,
                                  engine_.now());
    DetectionModel m = model;
    engine_.schedule(tr.delivery_time, EventPriority::network_delivery, "controller",
                     "model_redeploy", [this, d, m] {
                       devices_[static_cast<std::size_t>(d)]->on_model_update(m);
                     });
  }
  log_control("retrain", "round " + std::to_string(retrain_rounds_) + ", " +
                             std::to_string(deploys.size()) + " redeploys");
}

void Controller::mine_false_negatives() {
  if (!cfg_.controller.learning.mine_false_negatives) return;
  if (!cfg_.controller.learning.online_retraining && cfg_.controller.learning.missions < 2) return;
  if (cfg_.platform == Platform::centralized) return;

  std::map<int, std::pair<int, int>> batch;
  for (const auto& dev : devices_) {
    if (dev->phase() == DevicePhase::crashed) continue;  // flash lost
    int fn = 0;
    for (std::int64_t pid : dev->local_store()) {
      const auto& entry = log_.photo_entry(pid);
      if (!entry.photo.ground_truth_ids.empty()) fn++;
    }
    if (fn > 0) batch[dev->id()] = {0, fn};
  }
  if (batch.empty()) return;
  if (cfg_.controller.learning.scope == "global") {
    for (const auto& [d, fb] : batch) learning_.pooled_fn += fb.second;
  } else {
    for (const auto& [d, fb] : batch) learning_.per_device[d].second += fb.second;
  }
  int total = 0;
  for (const auto& [d, fb] : batch) total += fb.second;
  log_control("fn_mining", std::to_string(total) + " mined false negatives");
}

LearningState Controller::learning_state() const { return learning_; }

// --- completion ---

void Controller::exchange_started() { outstanding_exchanges_++; }

void Controller::exchange_finished() {
  outstanding_exchanges_--;
  check_completion();
}

std::vector<int> Controller::border_neighbors(int device_id) const {
  Rect own{0, 0, 0, 0};
  bool found = false;
  for (const auto& [id, entry] : table_) {
    if (entry.device_id == device_id && entry.parent_task == 0) {
      own = entry.rect;
      found = true;
      break;
    }
  }
  std::vector<int> out;
  if (!found) return out;
  std::set<int> seen;
  for (const auto& [id, entry] : table_) {
    if (entry.device_id == device_id || entry.parent_task != 0) continue;
    if (share_border(own, entry.rect) && !seen.count(entry.device_id)) {
      seen.insert(entry.device_id);
      out.push_back(entry.device_id);
    }
  }
  return out;
}

void Controller::on_task_complete(int device_id, std::uint64_t task_id) {
  auto it = table_.find(task_id);
  if (it == table_.end()) return;
  if (it->second.status == AssignmentStatus::active ||
      it->second.status == AssignmentStatus::pending) {
    it->second.status = AssignmentStatus::surveyed;
    open_tasks_--;
    log_control("task_surveyed",
                "task " + std::to_string(task_id) + " by drone-" + std::to_string(device_id));
    check_completion();
  }
}

void Controller::check_completion() {
  if (completion_time_ >= 0 || scenario_failed_) return;
  if (open_tasks_ == 0 && outstanding_photos_ == 0 && jobs_in_flight_.empty() &&
      outstanding_exchanges_ == 0) {
    completion_time_ = engine_.now();
    log_control("scenario_complete", "t=" + std::to_string(to_s(completion_time_)) + "s");
  }
}

void Controller::check_mission_over() {
  if (mission_over_) return;
  for (const auto& dev : devices_) {
    if (!phase_terminal(dev->phase())) return;
  }
  if (outstanding_photos_ != 0 || !jobs_in_flight_.empty() || outstanding_exchanges_ != 0) return;
  if (open_tasks_ != 0 && !scenario_failed_) return;
  mission_over_ = true;
  mine_false_negatives();
  log_control("mission_over", scenario_complete() ? "complete" : "incomplete");
}

std::vector<Rect> Controller::tiling_rects() const {
  std::vector<Rect> out;
  for (const auto& [id, entry] : table_) {
    if (entry.status == AssignmentStatus::reverted) continue;
    if (entry.rect.area() <= 0.0) continue;
    out.push_back(entry.rect);
  }
  return out;
}

void Controller::audit_tiling_now(const std::string& after_what) const {
  if (!tiling_ok(world_.config().field.rect(), tiling_rects())) {
    std::ostringstream os;
    os << "tiling invariant violated after " << after_what << "; rects:";
    for (const auto& [id, entry] : table_) {
      if (entry.status == AssignmentStatus::reverted || entry.rect.area() <= 0.0) continue;
      os << "\n  task " << id << " drone-" << entry.device_id << " ["
         << entry.rect.x << "," << entry.rect.y << " " << entry.rect.w << "x" << entry.rect.h
         << "] " << assignment_status_name(entry.status);
    }
    throw SimError(os.str());
  }
}

}  // namespace hive
