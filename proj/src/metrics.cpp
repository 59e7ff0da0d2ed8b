#include "fpgasched/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fpgasched/errors.hpp"

namespace fpgasched {

SimTime service_time(const TaskOutcome& task) {
  if (!task.first_launch) throw NeverLaunched("task " + std::to_string(task.id) + " never launched");
  return *task.first_launch - task.arrival;
}

std::vector<PriorityService> per_priority_service(const RunRecord& record) {
  std::map<int, PriorityService> rows;
  for (const auto& t : record.tasks) {
    auto& row = rows[t.priority];
    row.priority = t.priority;
    row.count += 1;
    row.sum_us += service_time(t);
  }
  std::vector<PriorityService> out;
  out.reserve(rows.size());
  for (auto& [p, row] : rows) {
    row.mean_us = static_cast<double>(row.sum_us) / static_cast<double>(row.count);
    out.push_back(row);
  }
  return out;
}

namespace {

// n per second of `denominator_us`: n * 1e6 and the denominator are exact in a
// double, so the division rounds once.
double per_second(std::size_t n, SimTime denominator_us) {
  return static_cast<double>(n) * 1e6 / static_cast<double>(denominator_us);
}

}  // namespace

double throughput(const RunRecord& record) {
  if (record.tasks.empty() || record.makespan <= 0) throw EmptyRun("throughput of an empty run");
  return per_second(record.tasks.size(), record.makespan);
}

double full_reconfig_bound(const RunRecord& record, SimTime t_full, SimTime t_partial) {
  if (record.tasks.empty() || record.makespan <= 0) throw EmptyRun("bound of an empty run");
  return per_second(record.tasks.size(),
                    record.makespan + record.n_reconfigs * (t_full - t_partial));
}

namespace {

bool same_knobs(const SimConfig& a, const SimConfig& b) {
  return a.n_regions == b.n_regions && a.policy.n_priorities == b.policy.n_priorities &&
         a.exec.save_window == b.exec.save_window &&
         a.exec.preempt_overhead == b.exec.preempt_overhead &&
         a.exec.restore_overhead == b.exec.restore_overhead && a.t_partial == b.t_partial &&
         a.t_full == b.t_full;
}

bool same_workload(const RunRecord& a, const RunRecord& b) {
  if (a.tasks.size() != b.tasks.size()) return false;
  for (std::size_t i = 0; i < a.tasks.size(); ++i) {
    const auto& x = a.tasks[i];
    const auto& y = b.tasks[i];
    if (x.id != y.id || x.arrival != y.arrival || x.priority != y.priority ||
        x.kernel != y.kernel || x.args != y.args || x.total_work != y.total_work) {
      return false;
    }
  }
  return true;
}

}  // namespace

double preemption_overhead(const RunRecord& non_preemptive, const RunRecord& preemptive) {
  if (non_preemptive.config.policy.preemption_enabled ||
      !preemptive.config.policy.preemption_enabled) {
    throw MismatchedConfigs("expected a non-preemptive and a preemptive record");
  }
  if (!same_knobs(non_preemptive.config, preemptive.config)) {
    throw MismatchedConfigs("records differ in more than the preemption flag");
  }
  if (!same_workload(non_preemptive, preemptive)) {
    throw MismatchedConfigs("records were produced from different workloads");
  }
  const double np = throughput(non_preemptive);
  const double p = throughput(preemptive);
  return (np - p) / np;
}

Summary summarize(std::span<const double> values) {
  Summary s;
  s.n = values.size();
  if (s.n == 0) return s;
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; })) {
    s.mean = values[0];
    return s;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n < 2) return s;
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(sq / static_cast<double>(s.n - 1));
  return s;
}

}  // namespace fpgasched
