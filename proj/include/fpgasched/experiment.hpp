#pragma once

// Experiment runner: one simulation from a parameter set, and the cartesian
// sweep over arrival rates, image sizes, region counts and the preemption
// flag. The sweep exists in a serial reference form and an OpenMP form; both
// produce identical results in identical order.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fpgasched/scheduler.hpp"
#include "fpgasched/workload.hpp"

namespace fpgasched {

/// Cost-model values with no published counterpart.
struct ModelKnobs {
  ExecConfig exec;
  SimTime t_partial = kDefaultPartialReconfig;
  SimTime t_full = kDefaultFullReconfig;
  SimTime median_cost = kMedianBlurCost;
  SimTime gaussian_cost = kGaussianBlurCost;
  std::int64_t checkpoint_stride = 1;
  int n_priorities = 5;
};

struct RateSpec {
  std::string label;
  SimTime window = kBusyWindow;

  friend bool operator==(const RateSpec&, const RateSpec&) = default;
};

/// Preset name or a window in seconds; the label is the text given.
RateSpec rate_spec(const std::string& text);

struct CellKey {
  RateSpec rate{"busy", kBusyWindow};
  ImageSize size{600, 600};
  int rrs = 1;
  bool preemption = true;

  friend bool operator==(const CellKey&, const CellKey&) = default;
};

std::string size_label(const ImageSize& s);

struct RunSpec {
  CellKey cell;
  std::uint64_t seed = 15;
  int replica = 0;
  int n_tasks = 30;
  ModelKnobs knobs;
  bool trace = false;
};

SimConfig make_sim_config(const RunSpec& spec);
WorkloadConfig make_workload_config(const RunSpec& spec);
std::vector<MenuEntry> make_menu(const ModelKnobs& knobs);

/// Generates the workload and simulates it.
RunRecord execute(const RunSpec& spec);
/// Simulates an explicit workload under the run's configuration.
RunRecord execute(const RunSpec& spec, std::vector<Task> workload);

struct SweepConfig {
  std::uint64_t base_seed = 15;
  int replicas = 10;
  int n_tasks = 30;
  std::vector<RateSpec> rates{{"busy", kBusyWindow}, {"medium", kMediumWindow}, {"idle", kIdleWindow}};
  std::vector<ImageSize> sizes{{200, 200}, {300, 300}, {400, 400}, {500, 500}, {600, 600}};
  std::vector<int> rrs{1, 2};
  std::vector<bool> preemption{false, true};
  ModelKnobs knobs;
  bool trace = false;
};

/// Cells in output order: rate, size, regions, preemption (off before on).
std::vector<CellKey> enumerate_cells(const SweepConfig& cfg);

/// Replica r of a cell uses seed base_seed + r.
RunSpec run_spec(const SweepConfig& cfg, const CellKey& cell, int replica);

struct SweepRun {
  std::size_t cell = 0;
  int replica = 0;
  std::uint64_t seed = 0;
  std::optional<RunRecord> record;
  std::string error;  ///< set when the run failed
};

struct SweepResult {
  std::vector<CellKey> cells;
  int replicas = 0;
  /// Index cell * replicas + replica.
  std::vector<SweepRun> runs;

  const SweepRun& at(std::size_t cell, int replica) const { return runs[cell * replicas + replica]; }
  std::vector<const SweepRun*> failures() const;
};

SweepResult run_sweep_serial(const SweepConfig& cfg);

/// Same result as run_sweep_serial. `threads` <= 0 uses the OpenMP default.
SweepResult run_sweep_parallel(const SweepConfig& cfg, int threads = 0);

}  // namespace fpgasched
