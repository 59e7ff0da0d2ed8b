#pragma once

// Small random scheduling instances for oracle comparisons.

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "fpgasched/scheduler.hpp"
#include "fpgasched/workload.hpp"

namespace instances {

using namespace fpgasched;

struct Instance {
  SimConfig cfg;
  std::vector<Task> tasks;
  std::int64_t max_stride = 1;
};

inline std::int64_t pick(SplitMix64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
}

/// Up to 6 tasks on up to 2 regions, at most 900 inner iterations per task.
/// `stride_one` forces checkpoint_stride = 1 on every kernel.
inline Instance random_instance(SplitMix64& rng, bool stride_one = false) {
  Instance in;
  const int n_kernels = static_cast<int>(pick(rng, 1, 3));
  std::vector<KernelRef> kernels;
  SimTime min_interval = 1'000'000;
  for (int k = 0; k < n_kernels; ++k) {
    auto spec = std::make_shared<KernelSpec>();
    spec->id = "k" + std::to_string(k);
    spec->bitstream_id = k;
    spec->n_int_args = 3;
    spec->n_tile_args = 2;
    spec->loops = {{2, pick(rng, 0, 2), pick(rng, 1, 2)},
                   {0, pick(rng, 0, 2), pick(rng, 1, 2)},
                   {1, pick(rng, 0, 2), pick(rng, 1, 2)}};
    spec->per_iter_cost = pick(rng, 1, 4);
    spec->checkpoint_stride = stride_one ? 1 : pick(rng, 1, 3);
    in.max_stride = std::max(in.max_stride, spec->checkpoint_stride);
    min_interval = std::min(min_interval, spec->per_iter_cost * spec->checkpoint_stride);
    kernels.push_back(spec);
  }
  in.cfg.n_regions = static_cast<int>(pick(rng, 1, 2));
  in.cfg.policy.preemption_enabled = rng.below(5) != 0;
  in.cfg.policy.n_priorities = 5;
  in.cfg.t_partial = pick(rng, 1, 200);
  in.cfg.t_full = in.cfg.t_partial + pick(rng, 0, 300);
  in.cfg.exec.save_window = pick(rng, 0, min_interval);
  in.cfg.exec.preempt_overhead = pick(rng, 0, 20);
  in.cfg.exec.restore_overhead = pick(rng, 0, 20);

  const int n = static_cast<int>(pick(rng, 1, 6));
  const SimTime window = pick(rng, 0, 3000);
  for (int i = 0; i < n; ++i) {
    Task t;
    t.id = i;
    t.kernel = kernels[rng.below(kernels.size())];
    t.priority = static_cast<int>(rng.below(5));
    t.arrival = pick(rng, 0, window);
    const std::int64_t iters = pick(rng, 1, 3);
    const std::int64_t h = pick(rng, 1, 10);
    const std::int64_t w = pick(rng, 1, 900 / (iters * h));
    t.args = {h, w, iters};
    in.tasks.push_back(std::move(t));
  }
  return in;
}

}  // namespace instances
