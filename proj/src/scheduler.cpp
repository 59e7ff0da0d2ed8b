#include "fpgasched/scheduler.hpp"

#include <algorithm>
#include <tuple>

#include "fpgasched/errors.hpp"

namespace fpgasched {

void validate(const SimConfig& cfg) {
  if (cfg.n_regions < 1) throw ConfigError("at least one region is required");
  if (cfg.policy.n_priorities < 1) throw ConfigError("at least one priority level is required");
  if (cfg.t_partial < 1 || cfg.t_full < 1) throw ConfigError("reconfiguration times must be >= 1 us");
  if (cfg.exec.save_window < 0 || cfg.exec.preempt_overhead < 0 ||
      cfg.exec.restore_overhead < 0) {
    throw ConfigError("negative execution overhead");
  }
}

// ---------------------------------------------------------------------------
// PriorityQueues

PriorityQueues::PriorityQueues(int n_priorities) : levels_(std::max(n_priorities, 0)) {}

void PriorityQueues::push(TaskId id, int priority, SimTime arrival) {
  if (priority < 0 || priority >= static_cast<int>(levels_.size())) {
    throw OutOfRange("priority " + std::to_string(priority) + " outside queue range");
  }
  if (where_.contains(id)) throw InvalidTransition("task " + std::to_string(id) + " already queued");
  levels_[priority].emplace(arrival, id);
  where_.emplace(id, priority);
}

std::optional<TaskId> PriorityQueues::pop_highest() {
  for (auto it = levels_.rbegin(); it != levels_.rend(); ++it) {
    if (!it->empty()) {
      const TaskId id = it->begin()->second;
      it->erase(it->begin());
      where_.erase(id);
      return id;
    }
  }
  return std::nullopt;
}

std::optional<int> PriorityQueues::highest_priority() const {
  for (int p = static_cast<int>(levels_.size()) - 1; p >= 0; --p) {
    if (!levels_[p].empty()) return p;
  }
  return std::nullopt;
}

bool PriorityQueues::contains(TaskId id) const { return where_.contains(id); }
bool PriorityQueues::empty() const { return where_.empty(); }
std::size_t PriorityQueues::size() const { return where_.size(); }

std::vector<TaskId> PriorityQueues::level(int priority) const {
  std::vector<TaskId> out;
  for (const auto& [arrival, id] : levels_.at(priority)) out.push_back(id);
  return out;
}

// ---------------------------------------------------------------------------
// IcapLock

bool IcapLock::acquire(RegionId region, BitstreamId bitstream) {
  if (!holder_) {
    holder_ = region;
    return true;
  }
  waiters_.push_back({region, bitstream});
  return false;
}

std::optional<IcapLock::Request> IcapLock::release(RegionId region) {
  if (holder_ != region) {
    throw InvalidTransition("region " + std::to_string(region) + " released an ICAP it does not hold");
  }
  holder_.reset();
  if (waiters_.empty()) return std::nullopt;
  Request next = waiters_.front();
  waiters_.pop_front();
  holder_ = next.region;
  return next;
}

// ---------------------------------------------------------------------------
// Policy helpers

std::optional<RegionId> find_available_region(std::span<const Region> regions,
                                              BitstreamId bitstream) {
  std::optional<RegionId> first_idle;
  for (const auto& r : regions) {
    if (r.state != RegionState::Idle) continue;
    if (r.loaded_bitstream == bitstream) return r.id;
    if (!first_idle) first_idle = r.id;
  }
  return first_idle;
}

std::optional<RegionId> select_victim(std::span<const RunningView> running, int incoming_priority) {
  const RunningView* best = nullptr;
  for (const auto& v : running) {
    if (v.priority >= incoming_priority) continue;
    if (!best || std::make_tuple(v.priority, -v.segment_start, v.region) <
                     std::make_tuple(best->priority, -best->segment_start, best->region)) {
      best = &v;
    }
  }
  if (!best) return std::nullopt;
  return best->region;
}

// ---------------------------------------------------------------------------
// Scheduler

Scheduler::Scheduler(SimConfig cfg, std::vector<Task> workload)
    : cfg_(std::move(cfg)), queues_(cfg_.policy.n_priorities) {
  validate(cfg_);
  std::stable_sort(workload.begin(), workload.end(), [](const Task& a, const Task& b) {
    return std::tie(a.arrival, a.id) < std::tie(b.arrival, b.id);
  });
  tasks_ = std::move(workload);
  outcomes_.reserve(tasks_.size());
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    Task& t = tasks_[i];
    if (!t.kernel) throw ConfigError("task " + std::to_string(t.id) + " has no kernel");
    validate_signature(*t.kernel);
    const KernelSpec& k = *t.kernel;
    if (k.per_iter_cost < 1) throw ConfigError("kernel " + k.id + ": per_iter_cost must be >= 1");
    if (k.checkpoint_stride < 1) throw ConfigError("kernel " + k.id + ": checkpoint_stride must be >= 1");
    if (cfg_.exec.save_window > k.per_iter_cost * k.checkpoint_stride) {
      throw ConfigError("kernel " + k.id + ": save window longer than the checkpoint interval");
    }
    if (t.priority < 0 || t.priority >= cfg_.policy.n_priorities) {
      throw ConfigError("task " + std::to_string(t.id) + ": priority out of range");
    }
    if (t.arrival < 0) throw ConfigError("task " + std::to_string(t.id) + ": negative arrival");
    if (t.state != TaskState::Pending || t.completed_work != 0 || t.context) {
      throw ConfigError("task " + std::to_string(t.id) + ": workload tasks must be fresh");
    }
    if (!index_.emplace(t.id, i).second) {
      throw ConfigError("duplicate task id " + std::to_string(t.id));
    }
    TaskOutcome o;
    o.id = t.id;
    o.kernel = k.id;
    o.priority = t.priority;
    o.arrival = t.arrival;
    o.args = t.args;
    o.total_work = total_work(t);  // throws InvalidArgs
    outcomes_.push_back(std::move(o));
  }
  regions_.resize(cfg_.n_regions);
  for (int r = 0; r < cfg_.n_regions; ++r) regions_[r].id = r;
  active_.resize(cfg_.n_regions);
  if (cfg_.record_trace) {
    engine_.set_trace_sink([this](const TraceRecord& rec) { trace_.push_back(rec); });
  }
}

const Task& Scheduler::task(TaskId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw OutOfRange("unknown task " + std::to_string(id));
  return tasks_[it->second];
}

Task& Scheduler::task_mut(TaskId id) { return const_cast<Task&>(std::as_const(*this).task(id)); }

TaskOutcome& Scheduler::outcome(TaskId id) { return outcomes_[index_.at(id)]; }

void Scheduler::preload(RegionId region, BitstreamId bitstream) {
  regions_.at(region).loaded_bitstream = bitstream;
}

bool Scheduler::has_finished() const {
  if (next_arrival_ < tasks_.size() || arrival_due_) return false;
  if (!queues_.empty()) return false;
  return std::all_of(regions_.begin(), regions_.end(),
                     [](const Region& r) { return r.state == RegionState::Idle; });
}

std::optional<SimTime> Scheduler::update_timeout() const {
  if (next_arrival_ < tasks_.size()) return tasks_[next_arrival_].arrival;
  return std::nullopt;
}

TaskId Scheduler::get_arrived_task() {
  if (!arrival_due_ || next_arrival_ >= tasks_.size()) throw NoArrival("no arrival is due");
  const Task& t = tasks_[next_arrival_];
  if (t.arrival != engine_.now()) throw NoArrival("head arrival is not due at the current time");
  arrival_due_ = false;
  ++next_arrival_;
  engine_.record(EventKind::TaskArrival, -1, t.id);
  return t.id;
}

std::optional<TaskId> Scheduler::get_task_from_queue() {
  auto id = queues_.pop_highest();
  if (!id) return std::nullopt;
  Task& t = task_mut(*id);
  if (t.state == TaskState::Preempted) t.transition(TaskState::Queued);
  dequeues_.push_back({engine_.now(), *id, t.priority, queues_.highest_priority()});
  return id;
}

void Scheduler::enqueue(TaskId id) {
  const Task& t = task(id);
  queues_.push(id, t.priority, t.arrival);
}

void Scheduler::serve_task(TaskId id) {
  Task& t = task_mut(id);
  if (t.state == TaskState::Pending) t.transition(TaskState::Queued);
  if (t.state != TaskState::Queued) {
    throw InvalidTransition("cannot serve task " + std::to_string(id) + " in state " +
                            std::string(to_string(t.state)));
  }

  // (1) a region whose last task has finished
  auto region = find_available_region(regions_, t.kernel->bitstream_id);
  if (!region) {
    // (2) preempt a lower-priority task, or wait
    if (cfg_.policy.preemption_enabled) {
      std::vector<RunningView> running;
      for (const auto& r : regions_) {
        if (r.state == RegionState::Running) {
          running.push_back({r.id, task(*r.occupant).priority, active_[r.id]->start});
        }
      }
      if (auto victim = select_victim(running, t.priority)) {
        preempt_region(*victim, id);
        return;
      }
    }
    enqueue(id);
    return;
  }
  commit(id, *region);
  // (3) swap the kernel if needed, (4) launch
  enqueue_reconfig(*region, t.kernel->bitstream_id);
}

void Scheduler::commit(TaskId id, RegionId region) {
  Region& r = regions_[region];
  r.reserved_for = id;
  TaskOutcome& o = outcome(id);
  if (!o.commit) {
    o.commit = engine_.now();
    o.commit_order = commits_++;
  }
}

void Scheduler::enqueue_reconfig(RegionId region, BitstreamId bitstream) {
  Region& r = regions_.at(region);
  if (!r.reserved_for) {
    throw InvalidTransition("region " + std::to_string(region) + " is not reserved");
  }
  if (r.loaded_bitstream == bitstream) {
    launch(region);
    return;
  }
  r.state = RegionState::Reconfiguring;
  r.occupant.reset();
  r.busy_until.reset();
  ReconfigRecord rec;
  rec.region = region;
  rec.bitstream = bitstream;
  rec.task = *r.reserved_for;
  rec.requested = engine_.now();
  pending_reconfig_[region] = rec;
  if (icap_.acquire(region, bitstream)) start_reconfig(region, bitstream);
}

void Scheduler::start_reconfig(RegionId region, BitstreamId bitstream) {
  const SimTime done = engine_.now() + cfg_.t_partial;
  ReconfigRecord& rec = pending_reconfig_.at(region);
  rec.start = engine_.now();
  rec.done = done;
  regions_[region].busy_until = done;
  Event e;
  e.time = done;
  e.kind = EventKind::ReconfigDone;
  e.region = region;
  e.task = rec.task;
  e.bitstream = bitstream;
  engine_.post(e);
}

void Scheduler::launch(RegionId region) {
  Region& r = regions_[region];
  const TaskId id = *r.reserved_for;
  Task& t = task_mut(id);
  const bool resumed = t.context.has_value();
  t.transition(TaskState::Running);
  ExecSegment seg = begin_segment(t, region, engine_.now(), cfg_.exec);
  const SimTime finish = finish_time(t, engine_.now(), cfg_.exec);
  active_[region] = seg;
  if (!t.first_launch) {
    t.first_launch = engine_.now();
    outcome(id).first_launch = engine_.now();
  }
  r.reserved_for.reset();
  r.occupant = id;
  r.state = RegionState::Running;
  r.busy_until = finish;
  launches_.push_back({engine_.now(), id, region, resumed});

  Event e;
  e.time = finish;
  e.kind = EventKind::KernelFinish;
  e.region = region;
  e.task = id;
  engine_.post(e);
}

void Scheduler::preempt_region(RegionId region, TaskId incoming) {
  Region& r = regions_[region];
  const TaskId victim_id = *r.occupant;
  Task& victim = task_mut(victim_id);
  ExecSegment& seg = *active_[region];
  const SimTime now = engine_.now();

  engine_.cancel([&](const Event& e) {
    return e.kind == EventKind::KernelFinish && e.region == region && e.task == victim_id;
  });
  const CheckpointState st = checkpoint_state_at(victim, now, seg, cfg_.exec);
  preempt(victim, now, seg, cfg_.exec);
  segments_.push_back(seg);
  active_[region].reset();

  TaskOutcome& vo = outcome(victim_id);
  vo.preemptions += 1;
  vo.reexecuted_iterations += st.progress - st.durable;
  preemptions_.push_back({now, region, victim_id, victim.priority, incoming,
                          task(incoming).priority, st.progress, st.durable, st.torn});
  enqueue(victim_id);

  r.occupant.reset();
  r.state = RegionState::Saving;
  r.busy_until = now + cfg_.exec.preempt_overhead;
  commit(incoming, region);

  Event e;
  e.time = now + cfg_.exec.preempt_overhead;
  e.kind = EventKind::SaveDone;
  e.region = region;
  e.task = victim_id;
  engine_.post(e);
}

void Scheduler::handle_interrupt(const Event& e) {
  Region& r = regions_.at(e.region);
  switch (e.kind) {
    case EventKind::KernelFinish: {
      Task& t = task_mut(e.task);
      t.completed_work = total_work(t);
      t.finish = e.time;
      t.transition(TaskState::Done);
      TaskOutcome& o = outcome(e.task);
      o.finish = e.time;
      ExecSegment seg = *active_[e.region];
      seg.end = e.time;
      seg.end_reason = SegmentEnd::Finished;
      segments_.push_back(seg);
      active_[e.region].reset();
      r.occupant.reset();
      r.busy_until.reset();
      r.state = RegionState::Idle;
      break;
    }
    case EventKind::ReconfigDone: {
      r.loaded_bitstream = e.bitstream;
      reconfigs_.push_back(pending_reconfig_.at(e.region));
      pending_reconfig_.erase(e.region);
      if (auto next = icap_.release(e.region)) {
        start_reconfig(next->region, next->bitstream);
      }
      launch(e.region);
      break;
    }
    case EventKind::SaveDone: {
      enqueue_reconfig(e.region, task(*r.reserved_for).kernel->bitstream_id);
      break;
    }
    case EventKind::TaskArrival:
      throw InvalidTransition("arrivals are driven by the timeout, not the event queue");
  }
}

bool Scheduler::step() {
  if (!started_) {
    started_ = true;
    timeout_ = update_timeout();
  }
  if (has_finished()) return false;

  const WaitResult w = engine_.wait_for_interrupt(timeout_);
  ++events_processed_;
  std::optional<TaskId> next;
  if (!w.is_interrupt()) {
    arrival_due_ = true;
    next = get_arrived_task();
  } else {
    handle_interrupt(w.event);
    if (has_finished()) return false;
    next = get_task_from_queue();
  }
  if (next) serve_task(*next);
  timeout_ = update_timeout();
  return true;
}

RunRecord Scheduler::run() {
  while (step()) {
  }
  return record();
}

RunRecord Scheduler::record() const {
  RunRecord rec;
  rec.config = cfg_;
  rec.trace = trace_;
  rec.tasks = outcomes_;
  for (auto& o : rec.tasks) o.state = task(o.id).state;
  std::sort(rec.tasks.begin(), rec.tasks.end(),
            [](const TaskOutcome& a, const TaskOutcome& b) { return a.id < b.id; });
  rec.segments = segments_;
  rec.launches = launches_;
  rec.preemptions = preemptions_;
  rec.reconfigs = reconfigs_;
  rec.dequeues = dequeues_;
  rec.n_reconfigs = static_cast<std::int64_t>(reconfigs_.size());
  rec.n_preemptions = static_cast<std::int64_t>(preemptions_.size());
  rec.events_processed = events_processed_;
  for (const auto& o : rec.tasks) {
    if (o.finish) rec.makespan = std::max(rec.makespan, *o.finish);
  }
  return rec;
}

RunRecord simulate(const SimConfig& cfg, std::vector<Task> workload) {
  Scheduler s(cfg, std::move(workload));
  return s.run();
}

}  // namespace fpgasched
