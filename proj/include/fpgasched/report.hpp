#pragma once

// File formats and sweep aggregation.
//
//   metrics CSV   rate,size,rrs,preemption,seed,replica,priority,service_mean_us,
//                 service_sum_us,throughput_per_s,reconfigs,preemptions,bound_per_s
//   trace         time,seq,kind,region,task
//   workload      id,arrival_us,priority,kernel,h,w,iters
//
// Every file starts with `#` lines echoing the effective configuration;
// readers skip them.

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpgasched/experiment.hpp"
#include "fpgasched/metrics.hpp"

namespace fpgasched {

inline constexpr std::string_view kMetricsHeader =
    "rate,size,rrs,preemption,seed,replica,priority,service_mean_us,service_sum_us,"
    "throughput_per_s,reconfigs,preemptions,bound_per_s";
inline constexpr std::string_view kTraceHeader = "time,seq,kind,region,task";
inline constexpr std::string_view kWorkloadHeader = "id,arrival_us,priority,kernel,h,w,iters";

std::string format_double(double v);

std::string describe(const ModelKnobs& knobs);
std::string describe(const RunSpec& spec);
std::string describe(const SweepConfig& cfg);

/// One row per priority present in the run; nothing for an empty run.
void write_metrics_rows(std::ostream& os, const CellKey& cell, std::uint64_t seed, int replica,
                        const RunRecord& record);
void write_run_metrics(std::ostream& os, const RunSpec& spec, const RunRecord& record);
void write_sweep_metrics(std::ostream& os, const SweepConfig& cfg, const SweepResult& result);

void write_trace_lines(std::ostream& os, const RunRecord& record);
void write_run_trace(std::ostream& os, const RunSpec& spec, const RunRecord& record);
/// All runs in cell order, each introduced by a `# run ...` line.
void write_sweep_traces(std::ostream& os, const SweepConfig& cfg, const SweepResult& result);

void write_workload(std::ostream& os, std::span<const Task> tasks, std::string_view comment = {});
/// Kernels are resolved by id in `catalog`. Throws FormatError.
std::vector<Task> read_workload(std::istream& is, const std::vector<MenuEntry>& catalog);

struct CellSummary {
  CellKey cell;
  std::size_t runs = 0;
  Summary throughput;
  Summary bound;
  Summary reconfigs;
  Summary preemptions;
  /// Per priority, over replicas in which that priority occurs.
  std::map<int, Summary> service_mean_us;
  std::map<int, Summary> service_sum_us;
};

/// Mean and sample standard deviation per metric per cell. Failed and empty
/// runs are left out.
std::vector<CellSummary> aggregate(const SweepResult& result);

struct OverheadSummary {
  RateSpec rate;
  ImageSize size;
  int rrs = 1;
  Summary overhead;  ///< over replicas, pairing equal seeds
};

std::vector<OverheadSummary> aggregate_overhead(const SweepResult& result);

void write_service_summary(std::ostream& os, const SweepConfig& cfg,
                           std::span<const CellSummary> rows);
void write_throughput_summary(std::ostream& os, const SweepConfig& cfg,
                              std::span<const CellSummary> rows);
void write_overhead_summary(std::ostream& os, const SweepConfig& cfg,
                            std::span<const OverheadSummary> rows);

}  // namespace fpgasched
