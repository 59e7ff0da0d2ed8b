#include "fpgasched/kernel_exec.hpp"

#include <algorithm>
#include <string>

#include "fpgasched/errors.hpp"

namespace fpgasched {

std::int64_t LoopDims::total() const {
  std::int64_t n = 1;
  for (const auto& l : levels) n *= l.extent;
  return n;
}

std::int64_t LoopDims::block(std::size_t i) const {
  std::int64_t n = 1;
  for (std::size_t j = i + 1; j < levels.size(); ++j) n *= levels[j].extent;
  return n;
}

LoopDims loop_dims(const KernelSpec& kernel, std::span<const std::int64_t> args) {
  if (kernel.loops.empty() || kernel.loops.size() > static_cast<std::size_t>(kContextCapacity)) {
    throw InvalidArgs("kernel " + kernel.id + ": loop nest depth must be in [1, " +
                      std::to_string(kContextCapacity) + "]");
  }
  LoopDims dims;
  dims.levels.reserve(kernel.loops.size());
  for (const auto& t : kernel.loops) {
    if (t.extent_arg < 0 || static_cast<std::size_t>(t.extent_arg) >= args.size()) {
      throw InvalidArgs("kernel " + kernel.id + ": missing argument " +
                        std::to_string(t.extent_arg));
    }
    if (t.incr == 0) throw InvalidArgs("kernel " + kernel.id + ": zero loop increment");
    const std::int64_t extent = args[t.extent_arg];
    if (extent < 1) {
      throw InvalidArgs("kernel " + kernel.id + ": loop extent " + std::to_string(extent) + " < 1");
    }
    dims.levels.push_back({extent, t.init, t.incr});
  }
  return dims;
}

std::int64_t total_work(const KernelSpec& kernel, std::span<const std::int64_t> args) {
  return loop_dims(kernel, args).total();
}

SimTime restore_overhead(const Task& task, const ExecConfig& cfg) {
  return task.context ? cfg.restore_overhead : 0;
}

SimTime finish_time(const Task& task, SimTime start, const ExecConfig& cfg) {
  const std::int64_t remaining = total_work(task) - task.completed_work;
  return start + restore_overhead(task, cfg) + remaining * task.kernel->per_iter_cost;
}

ExecSegment begin_segment(const Task& task, RegionId region, SimTime start, const ExecConfig& cfg) {
  ExecSegment seg;
  seg.task = task.id;
  seg.region = region;
  seg.start = start;
  seg.start_progress = task.completed_work;
  seg.restore = restore_overhead(task, cfg);
  return seg;
}

std::int64_t progress_at(const Task& task, SimTime t, const ExecSegment& segment) {
  const std::int64_t total = total_work(task);
  const SimTime elapsed = t - segment.start - segment.restore;
  if (elapsed <= 0) return segment.start_progress;
  const std::int64_t p = segment.start_progress + elapsed / task.kernel->per_iter_cost;
  return std::min(p, total);
}

LoopIndex index_of(std::int64_t progress, const LoopDims& dims) {
  const std::int64_t total = dims.total();
  if (progress < 0 || progress > total) {
    throw OutOfRange("progress " + std::to_string(progress) + " outside [0, " +
                     std::to_string(total) + "]");
  }
  const std::size_t n = dims.levels.size();
  LoopIndex index(n);
  std::int64_t rem = progress;
  for (std::size_t i = n; i-- > 1;) {
    const auto& l = dims.levels[i];
    index[i] = l.init + (rem % l.extent) * l.incr;
    rem /= l.extent;
  }
  index[0] = dims.levels[0].init + rem * dims.levels[0].incr;
  return index;
}

std::int64_t linearize(const LoopIndex& index, const LoopDims& dims) {
  if (index.size() != dims.levels.size()) {
    throw OutOfRange("index arity " + std::to_string(index.size()) + " != loop depth " +
                     std::to_string(dims.levels.size()));
  }
  std::int64_t progress = 0;
  bool inner_zero = true;
  for (std::size_t i = index.size(); i-- > 0;) {
    const auto& l = dims.levels[i];
    const std::int64_t d = index[i] - l.init;
    if (d % l.incr != 0) throw OutOfRange("loop variable off its increment grid");
    const std::int64_t step = d / l.incr;
    // The outermost level may sit at its extent only in the loop-exit state.
    const std::int64_t limit = (i == 0 && inner_zero) ? l.extent : l.extent - 1;
    if (step < 0 || step > limit) throw OutOfRange("loop variable outside its range");
    progress += step * dims.block(i);
    inner_zero = inner_zero && step == 0;
  }
  return progress;
}

Context make_context(std::int64_t progress, const LoopDims& dims, int valid) {
  const LoopIndex index = index_of(progress, dims);
  Context ctx;
  ctx.n_vars = static_cast<int>(dims.levels.size());
  for (std::size_t i = 0; i < dims.levels.size(); ++i) {
    const auto& l = dims.levels[i];
    ctx.var[i] = index[i];
    ctx.init_var[i] = l.init;
    ctx.incr_var[i] = l.incr;
    ctx.saved[i] = progress >= dims.block(i) ? 1 : 0;
  }
  ctx.valid = valid;
  return ctx;
}

CheckpointState checkpoint_state_at(const Task& task, SimTime t, const ExecSegment& segment,
                                    const ExecConfig& cfg) {
  const KernelSpec& k = *task.kernel;
  const std::int64_t total = total_work(task);
  const std::int64_t sp = segment.start_progress;
  CheckpointState st;
  st.progress = progress_at(task, t, segment);
  st.durable = sp;

  // Latest checkpoint position reached; the final iteration always checkpoints.
  const std::int64_t stride = k.checkpoint_stride;
  const std::int64_t last = st.progress == total ? total : (st.progress / stride) * stride;
  if (last <= sp) return st;

  const SimTime written_at = segment.start + segment.restore + (last - sp) * k.per_iter_cost;
  if (t - written_at < cfg.save_window) {
    st.torn = true;
    st.durable = std::max(sp, ((last - 1) / stride) * stride);
  } else {
    st.durable = last;
  }
  return st;
}

Context preempt(Task& task, SimTime t, ExecSegment& segment, const ExecConfig& cfg) {
  if (task.state != TaskState::Running) {
    throw NotRunning("task " + std::to_string(task.id) + " is " +
                     std::string(to_string(task.state)));
  }
  const LoopDims dims = loop_dims(*task.kernel, task.args);
  const CheckpointState st = checkpoint_state_at(task, t, segment, cfg);

  Context ctx;
  if (st.torn) {
    ctx = make_context(st.durable, dims, 0);
  } else if (st.durable > segment.start_progress) {
    ctx = make_context(st.durable, dims, 1);
  } else {
    // Nothing new written in this segment; the store still holds what was restored.
    ctx = task.context.value_or(make_context(st.durable, dims, 1));
  }
  task.context = ctx;
  task.completed_work = st.durable;
  task.transition(TaskState::Preempted);
  segment.end = t;
  segment.end_reason = SegmentEnd::Preempted;
  return ctx;
}

std::int64_t resume_progress(const Context& ctx, const LoopDims& dims) {
  if (ctx.n_vars == 0) return 0;
  if (ctx.n_vars != static_cast<int>(dims.levels.size())) {
    throw CorruptContext("context declares " + std::to_string(ctx.n_vars) +
                         " variables for a loop nest of depth " +
                         std::to_string(dims.levels.size()));
  }
  LoopIndex index(dims.levels.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    index[i] = ctx.saved[i] ? ctx.var[i] : ctx.init_var[i];
  }
  try {
    return linearize(index, dims);
  } catch (const OutOfRange& e) {
    throw CorruptContext(std::string("saved tuple outside loop nest: ") + e.what());
  }
}

}  // namespace fpgasched
