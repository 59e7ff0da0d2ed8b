#pragma once

// Deterministic discrete-event core. Virtual time only; one engine is driven
// by exactly one thread.

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fpgasched/core_model.hpp"

namespace fpgasched {

/// Listed in dequeue rank order for events sharing a timestamp: a region freed
/// at t is visible to a task arriving at t.
enum class EventKind {
  KernelFinish = 0,
  ReconfigDone = 1,
  SaveDone = 2,
  TaskArrival = 3,
};

std::string_view to_string(EventKind k);
int kind_rank(EventKind k);

struct Event {
  SimTime time = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::TaskArrival;
  RegionId region = -1;
  TaskId task = -1;
  BitstreamId bitstream = -1;
};

/// Dequeue order: (time, kind rank, seq).
struct EventOrder {
  bool operator()(const Event& a, const Event& b) const;
};

/// One line of the trace sink: `time,seq,kind,region,task`.
struct TraceRecord {
  SimTime time = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::TaskArrival;
  RegionId region = -1;
  TaskId task = -1;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

std::string format_trace_line(const TraceRecord& r);

struct WaitResult {
  enum class Type { Interrupt, ArrivalTimeout };
  Type type = Type::ArrivalTimeout;
  /// Set for Interrupt.
  Event event;

  bool is_interrupt() const { return type == Type::Interrupt; }
};

class Engine {
 public:
  using TraceSink = std::function<void(const TraceRecord&)>;

  SimTime now() const { return now_; }
  std::size_t pending() const { return queue_.size(); }
  bool empty() const { return queue_.empty(); }

  /// Enqueues `event` and returns its assigned seq. Throws TimeTravel if the
  /// event is in the past.
  std::uint64_t post(Event event);

  /// Removes every queued event matching `pred`; returns how many.
  std::size_t cancel(const std::function<bool(const Event&)>& pred);

  /// Blocks until the next event or the timeout instant, whichever comes
  /// first; an event at the timeout instant wins. Throws Exhausted with no
  /// events and no timeout.
  WaitResult wait_for_interrupt(std::optional<SimTime> timeout);

  /// Appends a trace record at now() with a fresh seq (used for arrivals,
  /// which are driven by the timeout rather than the queue).
  void record(EventKind kind, RegionId region, TaskId task);

  void set_trace_sink(TraceSink sink) { sink_ = std::move(sink); }

 private:
  void emit(const Event& e);

  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::set<Event, EventOrder> queue_;
  TraceSink sink_;
};

}  // namespace fpgasched
