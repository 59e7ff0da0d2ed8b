#include "fpgasched/sim_engine.hpp"

#include <tuple>

#include "fpgasched/errors.hpp"

namespace fpgasched {

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::KernelFinish: return "KernelFinish";
    case EventKind::ReconfigDone: return "ReconfigDone";
    case EventKind::SaveDone: return "SaveDone";
    case EventKind::TaskArrival: return "TaskArrival";
  }
  return "?";
}

int kind_rank(EventKind k) { return static_cast<int>(k); }

bool EventOrder::operator()(const Event& a, const Event& b) const {
  return std::make_tuple(a.time, kind_rank(a.kind), a.seq) <
         std::make_tuple(b.time, kind_rank(b.kind), b.seq);
}

std::string format_trace_line(const TraceRecord& r) {
  std::string s;
  s.reserve(48);
  s += std::to_string(r.time);
  s += ',';
  s += std::to_string(r.seq);
  s += ',';
  s += to_string(r.kind);
  s += ',';
  s += std::to_string(r.region);
  s += ',';
  s += std::to_string(r.task);
  return s;
}

std::uint64_t Engine::post(Event event) {
  if (event.time < now_) {
    throw TimeTravel("event at " + std::to_string(event.time) + " posted at " +
                     std::to_string(now_));
  }
  event.seq = next_seq_++;
  queue_.insert(event);
  return event.seq;
}

std::size_t Engine::cancel(const std::function<bool(const Event&)>& pred) {
  return std::erase_if(queue_, pred);
}

WaitResult Engine::wait_for_interrupt(std::optional<SimTime> timeout) {
  if (timeout && *timeout < now_) {
    throw TimeTravel("timeout at " + std::to_string(*timeout) + " is before now " +
                     std::to_string(now_));
  }
  if (queue_.empty() && !timeout) throw Exhausted("no pending events and no timeout");

  WaitResult r;
  if (!queue_.empty() && (!timeout || queue_.begin()->time <= *timeout)) {
    auto node = queue_.extract(queue_.begin());
    now_ = node.value().time;
    r.type = WaitResult::Type::Interrupt;
    r.event = node.value();
    emit(r.event);
    return r;
  }
  now_ = *timeout;
  r.type = WaitResult::Type::ArrivalTimeout;
  return r;
}

void Engine::record(EventKind kind, RegionId region, TaskId task) {
  Event e;
  e.time = now_;
  e.seq = next_seq_++;
  e.kind = kind;
  e.region = region;
  e.task = task;
  emit(e);
}

void Engine::emit(const Event& e) {
  if (sink_) sink_(TraceRecord{e.time, e.seq, e.kind, e.region, e.task});
}

}  // namespace fpgasched
