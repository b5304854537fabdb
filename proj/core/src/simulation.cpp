#include "hivemind/simulation.hpp"

#include <memory>
#include <set>

#include "hivemind/cluster.hpp"
#include "hivemind/controller.hpp"
#include "hivemind/device.hpp"
#include "hivemind/engine.hpp"
#include "hivemind/network.hpp"
#include "hivemind/runlog.hpp"
#include "hivemind/trace.hpp"
#include "hivemind/world.hpp"

namespace hive {

namespace {

std::string drone_actor(int id) { return "drone-" + std::to_string(id); }

std::vector<TraceRow> build_trace_rows(const RunLog& log, const Channel& channel,
                                       const Cluster* cluster) {
  std::vector<TraceRow> rows;

  for (const auto& t : channel.log()) {
    TraceRow r;
    r.t = t.delivery_time;
    r.actor = t.src;
    r.event = "transfer";
    r.task_type = transfer_kind_name(t.kind);
    r.latency_ms = round_ms(to_ms(t.delivery_time - t.enqueue_time));
    r.bytes = t.bytes;
    r.detail = "dst=" + t.dst;
    rows.push_back(std::move(r));
  }

  for (const auto& e : log.photos) {
    TraceRow r;
    r.t = e.photo.capture_time;
    r.actor = drone_actor(e.photo.device_id);
    r.event = "photo";
    r.task_type = photo_disposition_name(e.disposition);
    r.bytes = e.photo.size_bytes;
    r.detail = "id=" + std::to_string(e.photo.photo_id);
    rows.push_back(std::move(r));
  }

  for (const auto& e : log.onboard_tasks) {
    TraceRow r;
    r.t = e.end;
    r.actor = drone_actor(e.device_id);
    r.event = "onboard";
    r.task_type = e.kind;
    r.latency_ms = round_ms(to_ms(e.end - e.start));
    if (e.photo_id >= 0) r.detail = "photo=" + std::to_string(e.photo_id);
    rows.push_back(std::move(r));
  }

  for (const auto& e : log.device_events) {
    rows.push_back({e.t, drone_actor(e.device_id), e.event, "", -1.0, -1, -1.0, e.detail});
  }

  for (const auto& e : log.battery_samples) {
    TraceRow r;
    r.t = e.t;
    r.actor = drone_actor(e.device_id);
    r.event = "battery";
    r.battery_pct = round_ms(e.pct);  // three decimals, like every float cell
    rows.push_back(std::move(r));
  }

  for (const auto& e : log.registrations) {
    TraceRow r;
    r.t = e.t;
    r.actor = "controller";
    r.event = "registration";
    r.task_type = e.outcome;
    r.detail = "object=" + std::to_string(e.object_id) +
               ";photo=" + std::to_string(e.photo_id) +
               ";device=" + std::to_string(e.device_id);
    rows.push_back(std::move(r));
  }

  for (const auto& e : log.control_events) {
    rows.push_back({e.t, "controller", e.event, "", -1.0, -1, -1.0, e.detail});
  }

  if (cluster) {
    for (const auto& fn : cluster->functions()) {
      if (fn.state != FnState::complete && fn.state != FnState::superseded) continue;
      bool placed = fn.start_time > 0;
      TraceRow r;
      r.t = fn.end_time;
      r.actor = "worker-" + std::to_string(fn.worker_id);
      r.event = fn.state == FnState::complete ? "fn_complete" : "fn_superseded";
      r.task_type = job_kind_name(cluster->jobs()[fn.job_id].kind);
      if (placed) r.latency_ms = round_ms(to_ms(fn.end_time - fn.start_time));
      r.detail = "job=" + std::to_string(fn.job_id) + ";slot=" + std::to_string(fn.slot);
      if (placed) {
        r.detail += ";container=" + std::to_string(fn.container_id);
        r.detail += fn.cold_start ? ";cold=1" : ";cold=0";
      }
      r.detail += fn.is_respawn ? ";respawn=1" : ";respawn=0";
      r.detail += fn.tripped_probation ? ";probation=1" : ";probation=0";
      rows.push_back(std::move(r));
    }
    for (const auto& job : cluster->jobs()) {
      if (job.complete_time < 0) continue;
      TraceRow r;
      r.t = job.complete_time;
      r.actor = "cluster";
      r.event = "job_complete";
      r.task_type = job_kind_name(job.kind);
      r.latency_ms = round_ms(to_ms(job.complete_time - job.submit_time));
      r.detail = "job=" + std::to_string(job.job_id) +
                 ";sched_ms=" + format_ms(job.sched_latency_ms) +
                 ";device=" + std::to_string(job.device_id);
      rows.push_back(std::move(r));
    }
  }

  return rows;
}

// Decentralized missions have no cloud verification step; the registry is
// whatever the surviving swarm holds after pairwise exchange. Tally it with
// the same outcome vocabulary the controller uses.
void tally_swarm_registry(const ExperimentConfig& cfg,
                          const std::vector<std::unique_ptr<DeviceAgent>>& devices,
                          SimTime now, RunLog& log) {
  std::set<int> seen;
  for (const auto& dev : devices) {
    // Flash on devices lost in the field (crash or battery death mid-air)
    // never reaches anyone; only returned devices contribute.
    if (dev->phase() == DevicePhase::crashed || dev->phase() == DevicePhase::battery_dead) {
      continue;
    }
    for (const auto& det : dev->retained_results()) {
      std::string outcome;
      if (det.object_id < 0) {
        outcome = "false_positive";
      } else if (cfg.scenario == Scenario::people && !det.face_visible) {
        outcome = "discarded";
      } else if (seen.insert(det.object_id).second) {
        outcome = "unique";
      } else {
        outcome = "duplicate";
      }
      log.registrations.push_back({now, outcome, det.object_id, det.photo_id, det.device_id});
    }
  }
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
  RunResult result;
  int missions = std::max(1, cfg.controller.learning.missions);
  LearningState carryover;

  for (int m = 1; m <= missions; ++m) {
    Engine engine;
    World world(cfg.world, cfg.seed);
    Channel channel(cfg.network.channel);
    RunLog log;

    std::unique_ptr<Cluster> cluster;
    if (cfg.platform != Platform::decentralized) {
      cluster = std::make_unique<Cluster>(cfg.cluster, engine, cfg.seed);
    }

    std::vector<std::unique_ptr<DeviceAgent>> devices;
    devices.reserve(static_cast<std::size_t>(cfg.devices.count));
    for (int i = 0; i < cfg.devices.count; ++i) {
      devices.push_back(
          std::make_unique<DeviceAgent>(i, engine, world, channel, cfg, log, cfg.seed));
    }
    for (auto& d : devices) d->set_peers(&devices);

    Controller controller(engine, world, channel, cluster.get(), cfg, log, devices, cfg.seed,
                          carryover);
    for (auto& d : devices) d->set_controller(&controller);

    controller.start();
    engine.run_to_quiescence();

    if (cfg.platform == Platform::decentralized) {
      tally_swarm_registry(cfg, devices, engine.now(), log);
    }

    TraceRecorder recorder;
    for (auto& row : build_trace_rows(log, channel, cluster.get())) {
      recorder.add(std::move(row));
    }
    recorder.finalize();

    MissionArtifacts art;
    art.run_id = cfg.run_id() + (missions > 1 ? "-m" + std::to_string(m) : "");
    art.summary = summarize_trace(cfg, recorder.rows(), m, missions);
    art.trace_csv = recorder.to_csv(art.run_id);
    result.missions.push_back(std::move(art));

    carryover = controller.learning_state();
  }
  return result;
}

}  // namespace hive
