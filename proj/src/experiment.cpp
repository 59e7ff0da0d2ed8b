#include "fpgasched/experiment.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fpgasched/errors.hpp"

namespace fpgasched {

RateSpec rate_spec(const std::string& text) { return RateSpec{text, parse_rate(text)}; }

std::string size_label(const ImageSize& s) {
  if (s.h == s.w) return std::to_string(s.h);
  return std::to_string(s.h) + "x" + std::to_string(s.w);
}

std::vector<MenuEntry> make_menu(const ModelKnobs& knobs) {
  return default_menu(knobs.median_cost, knobs.gaussian_cost, knobs.checkpoint_stride);
}

SimConfig make_sim_config(const RunSpec& spec) {
  SimConfig cfg;
  cfg.n_regions = spec.cell.rrs;
  cfg.policy.preemption_enabled = spec.cell.preemption;
  cfg.policy.n_priorities = spec.knobs.n_priorities;
  cfg.exec = spec.knobs.exec;
  cfg.t_partial = spec.knobs.t_partial;
  cfg.t_full = spec.knobs.t_full;
  cfg.record_trace = spec.trace;
  return cfg;
}

WorkloadConfig make_workload_config(const RunSpec& spec) {
  WorkloadConfig w;
  w.seed = spec.seed;
  w.n_tasks = spec.n_tasks;
  w.arrival_window = spec.cell.rate.window;
  w.sizes = {spec.cell.size};
  w.n_priorities = spec.knobs.n_priorities;
  w.menu = make_menu(spec.knobs);
  return w;
}

RunRecord execute(const RunSpec& spec) { return execute(spec, generate(make_workload_config(spec))); }

RunRecord execute(const RunSpec& spec, std::vector<Task> workload) {
  return simulate(make_sim_config(spec), std::move(workload));
}

std::vector<CellKey> enumerate_cells(const SweepConfig& cfg) {
  std::vector<CellKey> cells;
  for (const auto& rate : cfg.rates) {
    for (const auto& size : cfg.sizes) {
      for (int rrs : cfg.rrs) {
        for (bool pre : cfg.preemption) cells.push_back({rate, size, rrs, pre});
      }
    }
  }
  return cells;
}

RunSpec run_spec(const SweepConfig& cfg, const CellKey& cell, int replica) {
  RunSpec spec;
  spec.cell = cell;
  spec.seed = cfg.base_seed + static_cast<std::uint64_t>(replica);
  spec.replica = replica;
  spec.n_tasks = cfg.n_tasks;
  spec.knobs = cfg.knobs;
  spec.trace = cfg.trace;
  return spec;
}

std::vector<const SweepRun*> SweepResult::failures() const {
  std::vector<const SweepRun*> out;
  for (const auto& r : runs) {
    if (!r.record) out.push_back(&r);
  }
  return out;
}

namespace {

SweepResult prepare(const SweepConfig& cfg) {
  if (cfg.replicas < 1) throw ConfigError("replicas must be >= 1");
  SweepResult result;
  result.cells = enumerate_cells(cfg);
  result.replicas = cfg.replicas;
  result.runs.resize(result.cells.size() * cfg.replicas);
  for (std::size_t c = 0; c < result.cells.size(); ++c) {
    for (int r = 0; r < cfg.replicas; ++r) {
      SweepRun& run = result.runs[c * cfg.replicas + r];
      run.cell = c;
      run.replica = r;
      run.seed = cfg.base_seed + static_cast<std::uint64_t>(r);
    }
  }
  return result;
}

void run_one(const SweepConfig& cfg, const std::vector<CellKey>& cells, SweepRun& run) {
  try {
    run.record = execute(run_spec(cfg, cells[run.cell], run.replica));
  } catch (const std::exception& e) {
    run.error = e.what();
  }
}

}  // namespace

SweepResult run_sweep_serial(const SweepConfig& cfg) {
  SweepResult result = prepare(cfg);
  for (auto& run : result.runs) run_one(cfg, result.cells, run);
  return result;
}

SweepResult run_sweep_parallel(const SweepConfig& cfg, int threads) {
  SweepResult result = prepare(cfg);
  const auto n = static_cast<std::int64_t>(result.runs.size());
#ifdef _OPENMP
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
  for (std::int64_t i = 0; i < n; ++i) run_one(cfg, result.cells, result.runs[i]);
#else
  (void)threads;
  for (std::int64_t i = 0; i < n; ++i) run_one(cfg, result.cells, result.runs[i]);
#endif
  return result;
}

}  // namespace fpgasched
