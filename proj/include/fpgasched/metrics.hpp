#pragma once

// Evaluation quantities computed from a finished RunRecord.

#include <cstdint>
#include <span>
#include <vector>

#include "fpgasched/scheduler.hpp"

namespace fpgasched {

/// Arrival to first kernel start. Throws NeverLaunched.
SimTime service_time(const TaskOutcome& task);

struct PriorityService {
  int priority = 0;
  std::int64_t count = 0;
  SimTime sum_us = 0;
  double mean_us = 0.0;
};

/// One row per priority that has at least one task, ascending priority.
std::vector<PriorityService> per_priority_service(const RunRecord& record);

/// Completed tasks per second of makespan. Throws EmptyRun.
double throughput(const RunRecord& record);

/// Throughput the same run would reach if every partial reconfiguration were
/// replaced by a full one: n / (makespan + n_reconfig * (t_full - t_partial)).
/// Throws EmptyRun.
double full_reconfig_bound(const RunRecord& record, SimTime t_full = kDefaultFullReconfig,
                           SimTime t_partial = kDefaultPartialReconfig);

/// Relative throughput loss of the preemptive run. Throws MismatchedConfigs
/// unless both records share workload and every knob but the preemption flag.
double preemption_overhead(const RunRecord& non_preemptive, const RunRecord& preemptive);

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation, 0 for n < 2
};

Summary summarize(std::span<const double> values);

}  // namespace fpgasched
