#include "hivemind/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hivemind/engine.hpp"

namespace hive {
namespace {

using nlohmann::json;

// Tracks which keys of an object were consumed so leftovers can be reported.
class Block {
 public:
  Block(const json& node, std::string path, std::vector<std::string>& errors)
      : node_(node), path_(std::move(path)), errors_(errors) {
    if (!node_.is_object()) {
      errors_.push_back(path_ + ": expected an object");
    }
  }

  ~Block() {
    if (!node_.is_object()) return;
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) {
        errors_.push_back(path_ + "." + it.key() + ": unknown key");
      }
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.is_object() && node_.contains(key);
  }

  const json* get(const std::string& key) {
    return has(key) ? &node_.at(key) : nullptr;
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    const json* v = get(key);
    if (!v) return;
    try {
      out = v->get<T>();
    } catch (const json::exception&) {
      errors_.push_back(path_ + "." + key + ": wrong type");
    }
  }

  Block sub(const std::string& key) {
    const json* v = get(key);
    static const json empty = json::object();
    return Block(v ? *v : empty, path_ + "." + key, errors_);
  }

  const json& node() const { return node_; }
  const std::string& path() const { return path_; }
  std::vector<std::string>& errors() { return errors_; }

 private:
  const json& node_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

void read_int_map(Block& b, const std::string& key, std::map<int, double>& out) {
  const json* v = b.get(key);
  if (!v) return;
  if (!v->is_object()) {
    b.errors().push_back(b.path() + "." + key + ": expected an object of device-id keys");
    return;
  }
  for (auto it = v->begin(); it != v->end(); ++it) {
    try {
      out[std::stoi(it.key())] = it.value().get<double>();
    } catch (...) {
      b.errors().push_back(b.path() + "." + key + "." + it.key() + ": bad entry");
    }
  }
}

void read_model(Block& parent, const std::string& key, OnboardModelConfig& m) {
  if (!parent.has(key)) return;
  Block b = parent.sub(key);
  b.read("tpr", m.tpr);
  b.read("fpr", m.fpr);
  b.read("floor_fpr", m.floor_fpr);
  b.read("floor_fnr", m.floor_fnr);
  b.read("kappa_fp", m.kappa_fp);
  b.read("kappa_fn", m.kappa_fn);
  b.read("latency_mean_ms", m.latency_mean_ms);
  b.read("latency_p99_ms", m.latency_p99_ms);
}

void read_latency(Block& parent, const std::string& key, TaskLatencySpec& s) {
  if (!parent.has(key)) return;
  Block b = parent.sub(key);
  b.read("mean_ms", s.mean_ms);
  b.read("p99_ms", s.p99_ms);
}

ExperimentConfig parse(const json& doc, std::vector<std::string>& errors,
                       std::vector<std::string>& warnings) {
  ExperimentConfig cfg;
  Block root(doc, "config", errors);

  std::string scenario = "items";
  std::string platform = "centralized";
  root.read("scenario", scenario);
  root.read("platform", platform);
  root.read("seed", cfg.seed);
  root.read("out_dir", cfg.out_dir);
  try {
    cfg.scenario = scenario_from_string(scenario);
  } catch (const SimError& e) {
    errors.push_back(e.what());
  }
  try {
    cfg.platform = platform_from_string(platform);
  } catch (const SimError& e) {
    errors.push_back(e.what());
  }

  if (root.has("world")) {
    Block b = root.sub("world");
    b.read("field_width_m", cfg.world.field.width);
    b.read("field_height_m", cfg.world.field.height);
    b.read("item_count", cfg.world.item_count);
    b.read("person_count", cfg.world.person_count);
    b.read("min_item_separation_m", cfg.world.min_item_separation_m);
    b.read("person_speed_mps", cfg.world.person_speed_mps);
    b.read("person_max_dwell_s", cfg.world.person_max_dwell_s);
    b.read("face_visible_prob", cfg.world.face_visible_prob);
  }

  if (root.has("planner")) {
    Block b = root.sub("planner");
    b.read("altitude_m", cfg.planner.altitude_m);
    b.read("fov_diag_deg", cfg.planner.fov_diag_deg);
    b.read("aspect_w", cfg.planner.aspect_w);
    b.read("aspect_h", cfg.planner.aspect_h);
    b.read("footprint_override_w_m", cfg.planner.footprint_override_w_m);
    b.read("footprint_override_h_m", cfg.planner.footprint_override_h_m);
    b.read("lane_overlap", cfg.planner.lane_overlap);
    b.read("rebalance_battery_threshold_pct",
           cfg.planner.rebalance_battery_threshold_pct);
  }

  if (root.has("devices")) {
    Block b = root.sub("devices");
    b.read("count", cfg.devices.count);
    b.read("speed_mps", cfg.devices.speed_mps);
    b.read("photo_interval_s", cfg.devices.photo_interval_s);
    b.read("takeoff_s", cfg.devices.takeoff_s);
    b.read("stagger_s", cfg.devices.stagger_s);
    b.read("takeoff_x_m", cfg.devices.takeoff_point.x);
    b.read("takeoff_y_m", cfg.devices.takeoff_point.y);
    b.read("motion_degradation", cfg.devices.motion_degradation);
    read_int_map(b, "speed_multipliers", cfg.devices.speed_multipliers);
    if (b.has("battery")) {
      Block bb = b.sub("battery");
      bb.read("hover_pct_per_s", cfg.devices.battery.hover_pct_per_s);
      bb.read("compute_pct_per_s", cfg.devices.battery.compute_pct_per_s);
      bb.read("takeoff_pct", cfg.devices.battery.takeoff_pct);
      read_int_map(bb, "drain_multipliers", cfg.devices.battery.drain_multipliers);
    }
    if (b.has("obstacle")) {
      Block ob = b.sub("obstacle");
      ob.read("rate_per_s", cfg.devices.obstacle.rate_per_s);
      ob.read("density_radius_m", cfg.devices.obstacle.density_radius_m);
      ob.read("density_limit", cfg.devices.obstacle.density_limit);
      ob.read("avoid_latency_mean_ms", cfg.devices.obstacle.avoid_latency_mean_ms);
      ob.read("avoid_latency_p99_ms", cfg.devices.obstacle.avoid_latency_p99_ms);
      ob.read("crash_h0", cfg.devices.obstacle.crash_h0);
      ob.read("crash_load_threshold", cfg.devices.obstacle.crash_load_threshold);
    }
    read_model(b, "filter_items", cfg.devices.filter_items);
    read_model(b, "filter_people", cfg.devices.filter_people);
    read_model(b, "recognize_items", cfg.devices.recognize_items);
    read_model(b, "recognize_people", cfg.devices.recognize_people);
  }

  if (root.has("network")) {
    Block b = root.sub("network");
    b.read("capacity_bps", cfg.network.channel.capacity_bps);
    b.read("propagation_ms", cfg.network.channel.propagation_ms);
    b.read("utilization_window_s", cfg.network.channel.utilization_window_s);
    b.read("photo_bytes", cfg.network.photo_bytes);
    b.read("heartbeat_bytes", cfg.network.heartbeat_bytes);
    b.read("command_bytes", cfg.network.command_bytes);
    b.read("coords_bytes_per_item", cfg.network.coords_bytes_per_item);
    b.read("model_redeploy_bytes", cfg.network.model_redeploy_bytes);
  }

  if (root.has("cluster")) {
    Block b = root.sub("cluster");
    b.read("workers", cfg.cluster.workers);
    b.read("cpus_per_worker", cfg.cluster.cpus_per_worker);
    b.read("keep_alive_ms", cfg.cluster.keep_alive_ms);
    b.read("cold_start_ms", cfg.cluster.cold_start_ms);
    b.read("sched_base_ms", cfg.cluster.sched_base_ms);
    b.read("sched_rate_coef", cfg.cluster.sched_rate_coef);
    b.read("sched_p99_over_mean", cfg.cluster.sched_p99_over_mean);
    if (b.has("fanout")) {
      Block fb = b.sub("fanout");
      fb.read("item_recognition", cfg.cluster.fanout.item_recognition);
      fb.read("people_recognition", cfg.cluster.fanout.people_recognition);
      fb.read("disambiguation", cfg.cluster.fanout.disambiguation);
      fb.read("retraining", cfg.cluster.fanout.retraining);
    }
    if (b.has("task_latency")) {
      Block tb = b.sub("task_latency");
      read_latency(tb, "item_recognition", cfg.cluster.task_latency.item_recognition);
      read_latency(tb, "people_recognition", cfg.cluster.task_latency.people_recognition);
      read_latency(tb, "disambiguation", cfg.cluster.task_latency.disambiguation);
      read_latency(tb, "retraining", cfg.cluster.task_latency.retraining);
    }
    if (b.has("straggler")) {
      Block sb = b.sub("straggler");
      sb.read("enabled", cfg.cluster.straggler.enabled);
      sb.read("monitor_tick_ms", cfg.cluster.straggler.monitor_tick_ms);
      sb.read("percentile", cfg.cluster.straggler.percentile);
      sb.read("min_siblings", cfg.cluster.straggler.min_siblings);
      sb.read("fallback_mean_factor", cfg.cluster.straggler.fallback_mean_factor);
      sb.read("trip_count", cfg.cluster.straggler.trip_count);
      sb.read("trip_window_s", cfg.cluster.straggler.trip_window_s);
      sb.read("probation_s", cfg.cluster.straggler.probation_s);
      sb.read("inject_prob", cfg.cluster.straggler.inject_prob);
      sb.read("inject_factor", cfg.cluster.straggler.inject_factor);
    }
  }

  if (root.has("controller")) {
    Block b = root.sub("controller");
    b.read("heartbeat_timeout_s", cfg.controller.heartbeat_timeout_s);
    b.read("heartbeat_check_interval_s", cfg.controller.heartbeat_check_interval_s);
    b.read("rebalance_interval_s", cfg.controller.rebalance_interval_s);
    b.read("progress_lag_threshold", cfg.controller.progress_lag_threshold);
    b.read("dedup_radius_m", cfg.controller.dedup_radius_m);
    if (b.has("learning")) {
      Block lb = b.sub("learning");
      lb.read("online_retraining", cfg.controller.learning.online_retraining);
      lb.read("scope", cfg.controller.learning.scope);
      lb.read("retrain_interval_s", cfg.controller.learning.retrain_interval_s);
      lb.read("mine_false_negatives", cfg.controller.learning.mine_false_negatives);
      lb.read("missions", cfg.controller.learning.missions);
    }
  }

  if (root.has("faults")) {
    Block b = root.sub("faults");
    b.read("forced_failures", cfg.faults.forced_failures);
    b.read("window_lo", cfg.faults.window_lo);
    b.read("window_hi", cfg.faults.window_hi);
    b.read("dropout_device", cfg.faults.dropout_device);
    b.read("dropout_t_s", cfg.faults.dropout_t_s);
    b.read("dropout_duration_s", cfg.faults.dropout_duration_s);
  }

  if (root.has("pricing")) {
    Block b = root.sub("pricing");
    b.read("compute_gb_s", cfg.pricing.compute_gb_s);
    b.read("per_request", cfg.pricing.per_request);
    b.read("storage_gb_month", cfg.pricing.storage_gb_month);
    b.read("write_per_1k", cfg.pricing.write_per_1k);
    b.read("read_per_1k", cfg.pricing.read_per_1k);
  }

  // Semantic validation. Kept after parsing so all structural errors are
  // already collected.
  auto err = [&](const std::string& m) { errors.push_back(m); };
  if (cfg.devices.speed_mps > 7.0)
    err("devices.speed_mps: above the 7 m/s hardware limit");
  if (cfg.devices.speed_mps <= 0.0) err("devices.speed_mps: must be positive");
  if (cfg.devices.count < 1) err("devices.count: must be at least 1");
  if (cfg.devices.photo_interval_s <= 0.0)
    err("devices.photo_interval_s: must be positive");
  if (cfg.world.field.width <= 0.0 || cfg.world.field.height <= 0.0)
    err("world.field dimensions must be positive");
  if (cfg.world.item_count < 0 || cfg.world.person_count < 0)
    err("world target counts must be non-negative");
  if (cfg.planner.lane_overlap < 0.0 || cfg.planner.lane_overlap >= 1.0)
    err("planner.lane_overlap: must be in [0, 1)");
  if (cfg.network.channel.capacity_bps <= 0.0)
    err("network.capacity_bps: must be positive");
  if (cfg.cluster.workers < 1 || cfg.cluster.cpus_per_worker < 1)
    err("cluster size must be at least one worker and one CPU");
  if (cfg.controller.learning.scope != "global" &&
      cfg.controller.learning.scope != "per_device")
    err("controller.learning.scope: must be \"global\" or \"per_device\"");
  if (cfg.controller.learning.missions < 1)
    err("controller.learning.missions: must be at least 1");
  if (cfg.faults.forced_failures < 0)
    err("faults.forced_failures: must be non-negative");
  if (cfg.faults.window_lo < 0.0 || cfg.faults.window_hi > 1.0 ||
      cfg.faults.window_lo > cfg.faults.window_hi)
    err("faults window must satisfy 0 <= lo <= hi <= 1");

  if (cfg.platform == Platform::centralized &&
      cfg.devices.photo_interval_s <= 0.25) {
    warnings.push_back(
        "centralized platform with photo_interval_s <= 0.25: expect sustained "
        "channel queueing; photos arrive faster than the link drains them");
  }

  return cfg;
}

json set_path(json doc, const std::string& path, const json& value) {
  json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    std::size_t dot = path.find('.', start);
    std::string key = path.substr(start, dot == std::string::npos
                                             ? std::string::npos
                                             : dot - start);
    if (key.empty()) throw SimError("override path has an empty segment: " + path);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      break;
    }
    if (!node->contains(key) || !(*node)[key].is_object()) (*node)[key] = json::object();
    node = &(*node)[key];
    start = dot + 1;
  }
  return doc;
}

json parse_doc(const std::string& text) {
  json doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  if (!doc.is_object()) throw SimError("config root must be a JSON object");
  return doc;
}

json apply_overrides(json doc, const std::vector<std::string>& overrides) {
  for (const std::string& ov : overrides) {
    std::size_t eq = ov.find('=');
    if (eq == std::string::npos)
      throw SimError("override must look like path.to.key=value: " + ov);
    std::string path = ov.substr(0, eq);
    std::string raw = ov.substr(eq + 1);
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::exception&) {
      value = raw;  // bare strings allowed without quotes
    }
    doc = set_path(std::move(doc), path, value);
  }
  return doc;
}

// A preset may carry per-scenario tuning under "scenario_overrides": the
// block matching the selected scenario is merge-patched over the document
// after CLI overrides, so one file serves both scenarios.
json apply_scenario_overrides(json doc) {
  if (!doc.is_object() || !doc.contains("scenario_overrides")) return doc;
  json blocks = doc.at("scenario_overrides");
  doc.erase("scenario_overrides");
  if (!blocks.is_object()) throw SimError("scenario_overrides: expected an object");
  std::string scenario = doc.value("scenario", "items");
  scenario = scenario_name(scenario_from_string(scenario));  // normalize aliases
  if (blocks.contains(scenario)) doc.merge_patch(blocks.at(scenario));
  return doc;
}

LoadedConfig finish(const json& doc) {
  std::vector<std::string> errors;
  LoadedConfig out;
  out.config = parse(doc, errors, out.warnings);
  if (!errors.empty()) {
    std::ostringstream msg;
    msg << "invalid config (" << errors.size() << " problem"
        << (errors.size() == 1 ? "" : "s") << "):";
    for (const std::string& e : errors) msg << "\n  - " << e;
    throw SimError(msg.str());
  }
  return out;
}

}  // namespace

const char* platform_name(Platform p) {
  switch (p) {
    case Platform::centralized: return "centralized";
    case Platform::decentralized: return "decentralized";
    case Platform::hivemind: return "hivemind";
  }
  return "?";
}

const char* scenario_name(Scenario s) {
  return s == Scenario::items ? "items" : "people";
}

Platform platform_from_string(const std::string& s) {
  if (s == "centralized") return Platform::centralized;
  if (s == "decentralized") return Platform::decentralized;
  if (s == "hivemind") return Platform::hivemind;
  throw SimError("unknown platform: " + s);
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "items" || s == "scenario-1") return Scenario::items;
  if (s == "people" || s == "scenario-2") return Scenario::people;
  throw SimError("unknown scenario: " + s);
}

DetectionModel OnboardModelConfig::to_model() const {
  DetectionModel m;
  m.tpr0 = tpr;
  m.fpr0 = fpr;
  m.floor_fpr = floor_fpr;
  m.floor_fnr = floor_fnr;
  m.kappa_fp = kappa_fp;
  m.kappa_fn = kappa_fn;
  m.latency_ms = LognormalSpec::from_mean_p99(latency_mean_ms, latency_p99_ms);
  return m;
}

std::string ExperimentConfig::run_id() const {
  std::ostringstream os;
  os << scenario_name(scenario) << "-" << platform_name(platform) << "-s" << seed;
  return os.str();
}

LoadedConfig load_config_file(const std::string& path,
                              const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw SimError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config_json(buf.str(), overrides);
}

LoadedConfig load_config_json(const std::string& json_text,
                              const std::vector<std::string>& overrides) {
  json doc;
  try {
    doc = parse_doc(json_text);
  } catch (const json::exception& e) {
    throw SimError(std::string("config is not valid JSON: ") + e.what());
  }
  return finish(apply_scenario_overrides(apply_overrides(std::move(doc), overrides)));
}

std::string apply_overrides_to_json(const std::string& json_text,
                                    const std::vector<std::string>& overrides) {
  return apply_overrides(parse_doc(json_text), overrides).dump(2);
}

std::string config_to_json(const ExperimentConfig& c) {
  json model_block = json::object();
  auto model_json = [](const OnboardModelConfig& m) {
    return json{{"tpr", m.tpr},
                {"fpr", m.fpr},
                {"floor_fpr", m.floor_fpr},
                {"floor_fnr", m.floor_fnr},
                {"kappa_fp", m.kappa_fp},
                {"kappa_fn", m.kappa_fn},
                {"latency_mean_ms", m.latency_mean_ms},
                {"latency_p99_ms", m.latency_p99_ms}};
  };
  auto int_map_json = [](const std::map<int, double>& m) {
    json o = json::object();
    for (auto& [k, v] : m) o[std::to_string(k)] = v;
    return o;
  };
  auto latency_json = [](const TaskLatencySpec& s) {
    return json{{"mean_ms", s.mean_ms}, {"p99_ms", s.p99_ms}};
  };

  json doc{
      {"scenario", scenario_name(c.scenario)},
      {"platform", platform_name(c.platform)},
      {"seed", c.seed},
      {"out_dir", c.out_dir},
      {"world",
       {{"field_width_m", c.world.field.width},
        {"field_height_m", c.world.field.height},
        {"item_count", c.world.item_count},
        {"person_count", c.world.person_count},
        {"min_item_separation_m", c.world.min_item_separation_m},
        {"person_speed_mps", c.world.person_speed_mps},
        {"person_max_dwell_s", c.world.person_max_dwell_s},
        {"face_visible_prob", c.world.face_visible_prob}}},
      {"planner",
       {{"altitude_m", c.planner.altitude_m},
        {"fov_diag_deg", c.planner.fov_diag_deg},
        {"aspect_w", c.planner.aspect_w},
        {"aspect_h", c.planner.aspect_h},
        {"footprint_override_w_m", c.planner.footprint_override_w_m},
        {"footprint_override_h_m", c.planner.footprint_override_h_m},
        {"lane_overlap", c.planner.lane_overlap},
        {"rebalance_battery_threshold_pct",
         c.planner.rebalance_battery_threshold_pct}}},
      {"devices",
       {{"count", c.devices.count},
        {"speed_mps", c.devices.speed_mps},
        {"photo_interval_s", c.devices.photo_interval_s},
        {"takeoff_s", c.devices.takeoff_s},
        {"stagger_s", c.devices.stagger_s},
        {"takeoff_x_m", c.devices.takeoff_point.x},
        {"takeoff_y_m", c.devices.takeoff_point.y},
        {"motion_degradation", c.devices.motion_degradation},
        {"speed_multipliers", int_map_json(c.devices.speed_multipliers)},
        {"battery",
         {{"hover_pct_per_s", c.devices.battery.hover_pct_per_s},
          {"compute_pct_per_s", c.devices.battery.compute_pct_per_s},
          {"takeoff_pct", c.devices.battery.takeoff_pct},
          {"drain_multipliers", int_map_json(c.devices.battery.drain_multipliers)}}},
        {"obstacle",
         {{"rate_per_s", c.devices.obstacle.rate_per_s},
          {"density_radius_m", c.devices.obstacle.density_radius_m},
          {"density_limit", c.devices.obstacle.density_limit},
          {"avoid_latency_mean_ms", c.devices.obstacle.avoid_latency_mean_ms},
          {"avoid_latency_p99_ms", c.devices.obstacle.avoid_latency_p99_ms},
          {"crash_h0", c.devices.obstacle.crash_h0},
          {"crash_load_threshold", c.devices.obstacle.crash_load_threshold}}},
        {"filter_items", model_json(c.devices.filter_items)},
        {"filter_people", model_json(c.devices.filter_people)},
        {"recognize_items", model_json(c.devices.recognize_items)},
        {"recognize_people", model_json(c.devices.recognize_people)}}},
      {"network",
       {{"capacity_bps", c.network.channel.capacity_bps},
        {"propagation_ms", c.network.channel.propagation_ms},
        {"utilization_window_s", c.network.channel.utilization_window_s},
        {"photo_bytes", c.network.photo_bytes},
        {"heartbeat_bytes", c.network.heartbeat_bytes},
        {"command_bytes", c.network.command_bytes},
        {"coords_bytes_per_item", c.network.coords_bytes_per_item},
        {"model_redeploy_bytes", c.network.model_redeploy_bytes}}},
      {"cluster",
       {{"workers", c.cluster.workers},
        {"cpus_per_worker", c.cluster.cpus_per_worker},
        {"keep_alive_ms", c.cluster.keep_alive_ms},
        {"cold_start_ms", c.cluster.cold_start_ms},
        {"sched_base_ms", c.cluster.sched_base_ms},
        {"sched_rate_coef", c.cluster.sched_rate_coef},
        {"sched_p99_over_mean", c.cluster.sched_p99_over_mean},
        {"fanout",
         {{"item_recognition", c.cluster.fanout.item_recognition},
          {"people_recognition", c.cluster.fanout.people_recognition},
          {"disambiguation", c.cluster.fanout.disambiguation},
          {"retraining", c.cluster.fanout.retraining}}},
        {"task_latency",
         {{"item_recognition", latency_json(c.cluster.task_latency.item_recognition)},
          {"people_recognition",
           latency_json(c.cluster.task_latency.people_recognition)},
          {"disambiguation", latency_json(c.cluster.task_latency.disambiguation)},
          {"retraining", latency_json(c.cluster.task_latency.retraining)}}},
        {"straggler",
         {{"enabled", c.cluster.straggler.enabled},
          {"monitor_tick_ms", c.cluster.straggler.monitor_tick_ms},
          {"percentile", c.cluster.straggler.percentile},
          {"min_siblings", c.cluster.straggler.min_siblings},
          {"fallback_mean_factor", c.cluster.straggler.fallback_mean_factor},
          {"trip_count", c.cluster.straggler.trip_count},
          {"trip_window_s", c.cluster.straggler.trip_window_s},
          {"probation_s", c.cluster.straggler.probation_s},
          {"inject_prob", c.cluster.straggler.inject_prob},
          {"inject_factor", c.cluster.straggler.inject_factor}}}}},
      {"controller",
       {{"heartbeat_timeout_s", c.controller.heartbeat_timeout_s},
        {"heartbeat_check_interval_s", c.controller.heartbeat_check_interval_s},
        {"rebalance_interval_s", c.controller.rebalance_interval_s},
        {"progress_lag_threshold", c.controller.progress_lag_threshold},
        {"dedup_radius_m", c.controller.dedup_radius_m},
        {"learning",
         {{"online_retraining", c.controller.learning.online_retraining},
          {"scope", c.controller.learning.scope},
          {"retrain_interval_s", c.controller.learning.retrain_interval_s},
          {"mine_false_negatives", c.controller.learning.mine_false_negatives},
          {"missions", c.controller.learning.missions}}}}},
      {"faults",
       {{"forced_failures", c.faults.forced_failures},
        {"window_lo", c.faults.window_lo},
        {"window_hi", c.faults.window_hi},
        {"dropout_device", c.faults.dropout_device},
        {"dropout_t_s", c.faults.dropout_t_s},
        {"dropout_duration_s", c.faults.dropout_duration_s}}},
      {"pricing",
       {{"compute_gb_s", c.pricing.compute_gb_s},
        {"per_request", c.pricing.per_request},
        {"storage_gb_month", c.pricing.storage_gb_month},
        {"write_per_1k", c.pricing.write_per_1k},
        {"read_per_1k", c.pricing.read_per_1k}}}};
  (void)model_block;
  return doc.dump(2);
}

}  // namespace hive
