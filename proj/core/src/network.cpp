#include "hivemind/network.hpp"

#include <algorithm>
#include <cmath>

#include "hivemind/engine.hpp"

namespace hive {

const char* transfer_kind_name(TransferKind k) {
  switch (k) {
    case TransferKind::photo: return "photo";
    case TransferKind::heartbeat: return "heartbeat";
    case TransferKind::command: return "command";
    case TransferKind::model_redeploy: return "model_redeploy";
    case TransferKind::peer_exchange: return "peer_exchange";
    case TransferKind::result: return "result";
  }
  return "?";
}

Channel::Channel(const ChannelConfig& cfg) : cfg_(cfg) {
  if (cfg.capacity_bps <= 0.0) throw SimError("channel: capacity must be positive");
}

SimTime Channel::service_time(std::int64_t bytes) const {
  return static_cast<SimTime>(
      std::llround(static_cast<double>(bytes) * 8.0 / cfg_.capacity_bps * kUsPerS));
}

Transfer Channel::submit(std::string src, std::string dst, std::int64_t bytes, TransferKind kind,
                         SimTime t) {
  if (bytes < 0) throw SimError("channel: negative transfer size");
  Transfer tr;
  tr.id = next_id_++;
  tr.src = std::move(src);
  tr.dst = std::move(dst);
  tr.bytes = bytes;
  tr.kind = kind;
  tr.enqueue_time = t;
  tr.start_time = std::max(t, busy_until_);
  SimTime service_end = tr.start_time + service_time(bytes);
  busy_until_ = service_end;
  tr.delivery_time = service_end + from_ms(cfg_.propagation_ms);
  total_bytes_ += bytes;
  log_.push_back(tr);
  return tr;
}

std::vector<double> Channel::utilization_series(SimTime horizon) const {
  SimTime window = from_s(cfg_.utilization_window_s);
  if (window <= 0) throw SimError("channel: utilization window must be positive");
  std::size_t n = static_cast<std::size_t>(horizon / window) + 1;
  std::vector<double> bits(n, 0.0);
  for (const auto& tr : log_) {
    SimTime service_end = tr.delivery_time - from_ms(cfg_.propagation_ms);
    std::size_t w = static_cast<std::size_t>(service_end / window);
    if (w < n) bits[w] += static_cast<double>(tr.bytes) * 8.0;
  }
  double window_capacity = cfg_.capacity_bps * cfg_.utilization_window_s;
  for (auto& b : bits) b /= window_capacity;
  return bits;
}

double Channel::utilization_between(SimTime from, SimTime to) const {
  if (to <= from) return 0.0;
  double bits = 0.0;
  for (const auto& tr : log_) {
    SimTime service_end = tr.delivery_time - from_ms(cfg_.propagation_ms);
    if (service_end >= from && service_end < to) bits += static_cast<double>(tr.bytes) * 8.0;
  }
  return bits / (cfg_.capacity_bps * to_s(to - from));
}

int saturation_analytic(double photo_rate_hz, std::int64_t photo_bytes, double transfer_fraction,
                        double capacity_bps) {
  if (photo_rate_hz <= 0.0 || photo_bytes <= 0) throw SimError("saturation: parameters must be positive");
  double per_device_bps = photo_rate_hz * transfer_fraction * static_cast<double>(photo_bytes) * 8.0;
  if (per_device_bps <= 0.0) return -1;  // no saturation
  return static_cast<int>(std::floor(capacity_bps / per_device_bps + 1e-9));
}

namespace {

// Detects whether the queue built by n staggered deterministic senders keeps
// growing over the horizon. Below the onset the backlog settles into a
// periodic steady state; past it the backlog grows linearly, so the mean
// queueing delay late in the horizon pulls away from the mid-horizon mean.
bool sweep_unstable(const SaturationSweepConfig& cfg, int n) {
  Channel channel(ChannelConfig{cfg.capacity_bps, 2.0, 1.0});
  double send_rate = cfg.photo_rate_hz * cfg.transfer_fraction;
  if (send_rate <= 0.0) return false;
  SimTime period = from_s(1.0 / send_rate);
  SimTime horizon = from_s(cfg.horizon_s);

  struct Arrival {
    SimTime t;
    int device;
  };
  std::vector<Arrival> arrivals;
  for (int d = 0; d < n; ++d) {
    for (SimTime t = from_s(cfg.stagger_s) * d; t < horizon; t += period) {
      arrivals.push_back({t, d});
    }
  }
  std::sort(arrivals.begin(), arrivals.end(), [](const Arrival& a, const Arrival& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.device < b.device;
  });

  // Mean queueing delay over a mid-horizon window vs. a late window. A stable
  // queue gives near-identical means; a saturated one grows linearly between
  // the two windows.
  double mid_sum = 0.0, late_sum = 0.0;
  std::size_t mid_n = 0, late_n = 0;
  for (const auto& a : arrivals) {
    Transfer tr = channel.submit("d" + std::to_string(a.device), "cloud", cfg.photo_bytes,
                                 TransferKind::photo, a.t);
    double frac = static_cast<double>(a.t) / static_cast<double>(horizon);
    if (frac >= 0.4 && frac < 0.5) {
      mid_sum += static_cast<double>(tr.queueing_delay());
      ++mid_n;
    } else if (frac >= 0.9) {
      late_sum += static_cast<double>(tr.queueing_delay());
      ++late_n;
    }
  }
  if (mid_n == 0 || late_n == 0) return false;
  double growth = late_sum / static_cast<double>(late_n) - mid_sum / static_cast<double>(mid_n);
  return growth > 2.0 * static_cast<double>(channel.service_time(cfg.photo_bytes));
}

}  // namespace

int saturation_empirical(const SaturationSweepConfig& cfg) {
  int last_ok = 0;
  for (int n = 1; n <= cfg.max_devices; ++n) {
    if (!sweep_unstable(cfg, n)) {
      last_ok = n;
    } else if (n > last_ok + 2) {
      break;  // well past the onset
    }
  }
  return last_ok;
}

}  // namespace hive
