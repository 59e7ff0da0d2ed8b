#pragma once

// Preemptive, priority-aware FCFS scheduler dispatching tasks onto
// reconfigurable regions. Reconfigurations are internal tasks serialized
// through the single configuration port (IcapLock).

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fpgasched/core_model.hpp"
#include "fpgasched/kernel_exec.hpp"
#include "fpgasched/sim_engine.hpp"

namespace fpgasched {

inline constexpr SimTime kDefaultPartialReconfig = 70'000;
inline constexpr SimTime kDefaultFullReconfig = 220'000;

struct SimConfig {
  int n_regions = 1;
  SchedPolicy policy;
  ExecConfig exec;
  SimTime t_partial = kDefaultPartialReconfig;
  SimTime t_full = kDefaultFullReconfig;
  bool record_trace = true;
};

/// Throws ConfigError on an unusable configuration.
void validate(const SimConfig& cfg);

/// P FIFO queues; within a level tasks are ordered by (arrival, id), so a
/// preempted task re-enters ahead of later arrivals of its priority.
class PriorityQueues {
 public:
  explicit PriorityQueues(int n_priorities);

  void push(TaskId id, int priority, SimTime arrival);
  /// Head of the highest non-empty level.
  std::optional<TaskId> pop_highest();
  std::optional<int> highest_priority() const;
  bool contains(TaskId id) const;
  bool empty() const;
  std::size_t size() const;
  std::vector<TaskId> level(int priority) const;

 private:
  std::vector<std::set<std::pair<SimTime, TaskId>>> levels_;
  std::unordered_map<TaskId, int> where_;
};

/// Single configuration port. One holder at a time, FIFO waiters.
class IcapLock {
 public:
  struct Request {
    RegionId region;
    BitstreamId bitstream;
  };

  /// Returns true when the port was free and `region` now holds it.
  bool acquire(RegionId region, BitstreamId bitstream);
  /// Releases the port and hands it to the next waiter, if any.
  std::optional<Request> release(RegionId region);

  std::optional<RegionId> holder() const { return holder_; }
  const std::deque<Request>& waiters() const { return waiters_; }

 private:
  std::optional<RegionId> holder_;
  std::deque<Request> waiters_;
};

/// Among Idle regions, one already holding `bitstream` if possible; ties go to
/// the lowest region id.
std::optional<RegionId> find_available_region(std::span<const Region> regions,
                                              BitstreamId bitstream);

/// A preemptible region as seen by victim selection.
struct RunningView {
  RegionId region = 0;
  int priority = 0;
  SimTime segment_start = 0;
};

/// Region running the lowest priority strictly below `incoming_priority`;
/// ties go to the latest segment start, then the lowest region id.
std::optional<RegionId> select_victim(std::span<const RunningView> running, int incoming_priority);

struct LaunchRecord {
  SimTime time = 0;
  TaskId task = 0;
  RegionId region = 0;
  bool resumed = false;

  friend bool operator==(const LaunchRecord&, const LaunchRecord&) = default;
};

struct PreemptionRecord {
  SimTime time = 0;
  RegionId region = 0;
  TaskId victim = 0;
  int victim_priority = 0;
  TaskId incoming = 0;
  int incoming_priority = 0;
  std::int64_t progress = 0;
  std::int64_t durable = 0;
  bool torn = false;
};

struct ReconfigRecord {
  RegionId region = 0;
  BitstreamId bitstream = 0;
  TaskId task = 0;
  SimTime requested = 0;
  SimTime start = 0;
  SimTime done = 0;
};

/// A task taken out of the priority queues.
struct DequeueRecord {
  SimTime time = 0;
  TaskId task = 0;
  int priority = 0;
  /// Highest priority still waiting right after the dequeue.
  std::optional<int> highest_waiting;
};

struct TaskOutcome {
  TaskId id = 0;
  std::string kernel;
  int priority = 0;
  SimTime arrival = 0;
  std::vector<std::int64_t> args;
  std::int64_t total_work = 0;
  /// Instant the task was first committed to a region, and its rank among commits.
  std::optional<SimTime> commit;
  std::optional<std::int64_t> commit_order;
  std::optional<SimTime> first_launch;
  std::optional<SimTime> finish;
  int preemptions = 0;
  std::int64_t reexecuted_iterations = 0;
  TaskState state = TaskState::Pending;
};

struct RunRecord {
  SimConfig config;
  std::vector<TraceRecord> trace;
  std::vector<TaskOutcome> tasks;  ///< sorted by id
  std::vector<ExecSegment> segments;
  std::vector<LaunchRecord> launches;
  std::vector<PreemptionRecord> preemptions;
  std::vector<ReconfigRecord> reconfigs;
  std::vector<DequeueRecord> dequeues;
  std::int64_t n_reconfigs = 0;
  std::int64_t n_preemptions = 0;
  std::size_t events_processed = 0;
  SimTime makespan = 0;
};

class Scheduler {
 public:
  /// Validates the configuration, every kernel signature and every task, and
  /// sorts the workload by (arrival, id).
  Scheduler(SimConfig cfg, std::vector<Task> workload);
  Scheduler(const Scheduler&) = delete;
  Scheduler& operator=(const Scheduler&) = delete;

  /// Runs the main loop to completion.
  RunRecord run();

  /// One iteration of the main loop. Returns false once the run has finished.
  bool step();

  bool has_finished() const;
  /// Takes the arrival whose timeout just fired. Throws NoArrival otherwise.
  TaskId get_arrived_task();
  std::optional<TaskId> get_task_from_queue();
  void serve_task(TaskId id);
  std::optional<SimTime> update_timeout() const;
  /// Requests a reconfiguration of `region` (already reserved) to `bitstream`.
  /// With the bitstream already loaded, the reserved task launches at once.
  void enqueue_reconfig(RegionId region, BitstreamId bitstream);
  void handle_interrupt(const Event& e);

  /// Marks `bitstream` as already configured in `region` (warm start).
  void preload(RegionId region, BitstreamId bitstream);

  const Task& task(TaskId id) const;
  const std::vector<Region>& regions() const { return regions_; }
  const PriorityQueues& queues() const { return queues_; }
  const IcapLock& icap() const { return icap_; }
  const Engine& engine() const { return engine_; }
  const SimConfig& config() const { return cfg_; }

  /// Snapshot of everything recorded so far.
  RunRecord record() const;

 private:
  Task& task_mut(TaskId id);
  TaskOutcome& outcome(TaskId id);
  void commit(TaskId id, RegionId region);
  void launch(RegionId region);
  void preempt_region(RegionId region, TaskId incoming);
  void start_reconfig(RegionId region, BitstreamId bitstream);
  void enqueue(TaskId id);

  SimConfig cfg_;
  Engine engine_;
  std::vector<Task> tasks_;
  std::vector<TaskOutcome> outcomes_;
  std::unordered_map<TaskId, std::size_t> index_;
  std::vector<Region> regions_;
  std::vector<std::optional<ExecSegment>> active_;
  std::map<RegionId, ReconfigRecord> pending_reconfig_;
  PriorityQueues queues_;
  IcapLock icap_;
  std::size_t next_arrival_ = 0;
  bool arrival_due_ = false;
  std::optional<SimTime> timeout_;
  bool started_ = false;
  std::int64_t commits_ = 0;

  std::vector<TraceRecord> trace_;
  std::vector<ExecSegment> segments_;
  std::vector<LaunchRecord> launches_;
  std::vector<PreemptionRecord> preemptions_;
  std::vector<ReconfigRecord> reconfigs_;
  std::vector<DequeueRecord> dequeues_;
  std::size_t events_processed_ = 0;
};

/// Convenience wrapper: Scheduler(cfg, workload).run().
RunRecord simulate(const SimConfig& cfg, std::vector<Task> workload);

}  // namespace fpgasched
