#include "hivemind/engine.hpp"

#include <utility>

namespace hive {

EventId Engine::schedule(SimTime t, EventPriority prio, std::string actor, std::string kind,
                         Handler handler) {
  if (t < now_) {
    throw SimError("schedule in the past: actor '" + actor + "' event '" + kind + "' at t=" +
                   std::to_string(t) + "us, clock=" + std::to_string(now_) + "us");
  }
  EventId id = next_seq_++;
  queue_.push(Event{t, static_cast<int>(prio), id, std::move(actor), std::move(kind),
                    std::move(handler)});
  return id;
}

void Engine::dispatch_one() {
  // priority_queue::top is const; move out via pop-copy of the handler.
  Event ev = queue_.top();
  queue_.pop();
  now_ = ev.time;
  ++dispatched_;
  if (observer) {
    observer(DispatchRecord{ev.time, static_cast<EventPriority>(ev.prio), ev.seq, ev.actor,
                            ev.kind});
  }
  ev.handler();
}

std::size_t Engine::run_until(SimTime stop) {
  std::size_t n = 0;
  while (!queue_.empty() && queue_.top().time <= stop) {
    dispatch_one();
    ++n;
  }
  return n;
}

std::size_t Engine::run_to_quiescence() {
  std::size_t n = 0;
  while (!queue_.empty()) {
    dispatch_one();
    ++n;
  }
  return n;
}

}  // namespace hive
