#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "hivemind/sim_time.hpp"

namespace hive {

enum class TransferKind {
  photo,
  heartbeat,
  command,
  model_redeploy,
  peer_exchange,
  result,
};

const char* transfer_kind_name(TransferKind k);

struct Transfer {
  std::uint64_t id = 0;
  std::string src;
  std::string dst;
  std::int64_t bytes = 0;
  TransferKind kind = TransferKind::photo;
  SimTime enqueue_time = 0;
  SimTime start_time = 0;
  SimTime delivery_time = 0;

  SimTime queueing_delay() const { return start_time - enqueue_time; }
};

struct ChannelConfig {
  double capacity_bps = 867e6;
  double propagation_ms = 2.0;
  double utilization_window_s = 1.0;
};

// Shared-capacity FIFO wireless channel. All uplink and downlink traffic
// drains from one capacity pool; saturation shows up purely as queueing
// delay, never as loss.
class Channel {
 public:
  explicit Channel(const ChannelConfig& cfg);

  // Computes FIFO service times for a transfer entering at t. The caller
  // schedules the delivery event at Transfer::delivery_time.
  Transfer submit(std::string src, std::string dst, std::int64_t bytes, TransferKind kind,
                  SimTime t);

  // Per-window delivered-bits / capacity, attributed to the window in which
  // service (excluding propagation) completes. Recomputable from the trace.
  std::vector<double> utilization_series(SimTime horizon) const;
  double utilization_between(SimTime from, SimTime to) const;

  std::int64_t total_bytes() const { return total_bytes_; }
  const std::vector<Transfer>& log() const { return log_; }
  const ChannelConfig& config() const { return cfg_; }
  SimTime service_time(std::int64_t bytes) const;

 private:
  ChannelConfig cfg_;
  SimTime busy_until_ = 0;
  std::uint64_t next_id_ = 0;
  std::int64_t total_bytes_ = 0;
  std::vector<Transfer> log_;
};

// Largest device count sustainable by the closed-form bound
// n * rate * fraction * bytes * 8 <= capacity. Returns -1 ("no saturation")
// when per-device traffic is zero.
int saturation_analytic(double photo_rate_hz, std::int64_t photo_bytes, double transfer_fraction,
                        double capacity_bps);

// Empirical counterpart: replays deterministic staggered mean-rate arrivals
// through a Channel and returns the largest n for which the queueing delay
// settles instead of growing across the horizon.
struct SaturationSweepConfig {
  double photo_rate_hz = 1.0;
  std::int64_t photo_bytes = 4168269;
  double transfer_fraction = 1.0;
  double capacity_bps = 867e6;
  double stagger_s = 0.1;
  double horizon_s = 600.0;
  int max_devices = 200;
};
int saturation_empirical(const SaturationSweepConfig& cfg);

}  // namespace hive
