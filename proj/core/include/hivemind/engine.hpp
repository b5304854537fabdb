#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "hivemind/sim_time.hpp"

namespace hive {

class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dispatch order at equal timestamps: network deliveries first so control
// decisions see the freshest state, then compute completions, heartbeats,
// and finally controller decisions. Ties within a priority break by
// insertion sequence.
enum class EventPriority : int {
  network_delivery = 0,
  compute_completion = 1,
  heartbeat = 2,
  control = 3,
};

using EventId = std::uint64_t;

struct DispatchRecord {
  SimTime time;
  EventPriority priority;
  EventId seq;
  std::string actor;
  std::string kind;
};

// Deterministic single-threaded discrete-event engine.
class Engine {
 public:
  using Handler = std::function<void()>;

  EventId schedule(SimTime t, EventPriority prio, std::string actor, std::string kind,
                   Handler handler);
  EventId schedule_in(SimTime dt, EventPriority prio, std::string actor, std::string kind,
                      Handler handler) {
    return schedule(now_ + dt, prio, std::move(actor), std::move(kind), std::move(handler));
  }

  SimTime now() const { return now_; }
  bool quiescent() const { return queue_.empty(); }
  std::uint64_t dispatched_count() const { return dispatched_; }

  // Dispatches every event with time <= stop (inclusive); the clock lands on
  // the last dispatched timestamp. Returns the number dispatched.
  std::size_t run_until(SimTime stop);
  // Dispatches until the queue empties.
  std::size_t run_to_quiescence();

  // Observation hook, invoked before each handler. Tracing through this hook
  // must never mutate simulation state.
  std::function<void(const DispatchRecord&)> observer;

 private:
  struct Event {
    SimTime time;
    int prio;
    EventId seq;
    std::string actor;
    std::string kind;
    Handler handler;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.prio != b.prio) return a.prio > b.prio;
      return a.seq > b.seq;
    }
  };

  void dispatch_one();

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  SimTime now_ = 0;
  EventId next_seq_ = 0;
  std::uint64_t dispatched_ = 0;
};

}  // namespace hive
