#ifndef MIMOSIM_EVENT_QUEUE_HPP
#define MIMOSIM_EVENT_QUEUE_HPP

#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "mimosim/units.hpp"

namespace mimosim {

enum class EventKind : std::uint8_t {
  kArrivalStart,
  kArrivalEnd,
  kTimer,
  kAppPacketReady,
  kCcaUpdate,
};

struct Event {
  TimeNs time = 0;
  std::uint64_t seq = 0;  // insertion order, breaks ties deterministically
  int target = -1;        // node index
  EventKind kind = EventKind::kTimer;
  std::uint64_t payload = 0;  // arrival id / timer tag, interpreted by the sim
  int aux = 0;
};

// Min-heap on (time, seq). Cancellation is lazy: cancelled handles are skipped
// at pop time.
class EventQueue {
 public:
  using Handle = std::uint64_t;

  Handle schedule(TimeNs time, int target, EventKind kind,
                  std::uint64_t payload = 0, int aux = 0) {
    if (time < now_) {
      throw std::logic_error("EventQueue: scheduling into the past");
    }
    Event ev;
    ev.time = time;
    ev.seq = next_seq_++;
    ev.target = target;
    ev.kind = kind;
    ev.payload = payload;
    ev.aux = aux;
    heap_.push(ev);
    return ev.seq;
  }

  void cancel(Handle h) { cancelled_.insert(h); }

  std::optional<Event> pop() {
    while (!heap_.empty()) {
      Event ev = heap_.top();
      heap_.pop();
      auto it = cancelled_.find(ev.seq);
      if (it != cancelled_.end()) {
        cancelled_.erase(it);
        continue;
      }
      now_ = ev.time;
      return ev;
    }
    return std::nullopt;
  }

  std::optional<TimeNs> peek_time() const {
    // May report the time of a cancelled head; callers only use this as a
    // lower bound.
    if (heap_.empty()) return std::nullopt;
    return heap_.top().time;
  }

  bool empty() const { return heap_.size() == cancelled_.size() || heap_.empty(); }
  std::size_t size() const { return heap_.size() - cancelled_.size(); }
  TimeNs now() const { return now_; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::unordered_set<Handle> cancelled_;
  std::uint64_t next_seq_ = 0;
  TimeNs now_ = 0;
};

}  // namespace mimosim

#endif  // MIMOSIM_EVENT_QUEUE_HPP
