#pragma once

// Execution model of a checkpointable kernel. A kernel is a nest of `for_save`
// loops; progress is the number of completed inner iterations, and a durable
// checkpoint of the loop variables is written after every
// `checkpoint_stride` inner iterations. Preemption is asynchronous: a reset
// that lands while a checkpoint is being written tears that save, and resume
// falls back to the previously saved values.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fpgasched/core_model.hpp"

namespace fpgasched {

struct LoopLevel {
  std::int64_t extent = 1;
  std::int64_t init = 0;
  std::int64_t incr = 1;
};

/// Concrete loop nest of one task, outermost level first.
struct LoopDims {
  std::vector<LoopLevel> levels;

  std::int64_t total() const;
  /// Number of inner iterations covered by one step of level `i`.
  std::int64_t block(std::size_t i) const;
};

/// Loop variable values, outermost first.
using LoopIndex = std::vector<std::int64_t>;

/// Timing knobs of the execution model that are not per-kernel.
struct ExecConfig {
  /// Duration of an in-flight checkpoint write, measured from the iteration end.
  SimTime save_window = 1;
  /// Host-side copy of a victim context after the region reset.
  SimTime preempt_overhead = 100;
  /// Copy of a saved context back to the device before a resumed launch.
  SimTime restore_overhead = 100;
};

enum class SegmentEnd { Finished, Preempted };

/// One uninterrupted stay of a task on a region.
struct ExecSegment {
  TaskId task = 0;
  RegionId region = 0;
  SimTime start = 0;
  std::int64_t start_progress = 0;
  /// Context restore time paid at the start of this segment.
  SimTime restore = 0;
  std::optional<SimTime> end;
  std::optional<SegmentEnd> end_reason;
};

/// Throws InvalidArgs when an extent is < 1 or an argument is missing.
LoopDims loop_dims(const KernelSpec& kernel, std::span<const std::int64_t> args);
std::int64_t total_work(const KernelSpec& kernel, std::span<const std::int64_t> args);
inline std::int64_t total_work(const Task& task) { return total_work(*task.kernel, task.args); }

SimTime restore_overhead(const Task& task, const ExecConfig& cfg);

/// Completion instant of `task` if launched at `start` from its completed work.
SimTime finish_time(const Task& task, SimTime start, const ExecConfig& cfg);

/// Opens a segment for `task` on `region` at `start`.
ExecSegment begin_segment(const Task& task, RegionId region, SimTime start, const ExecConfig& cfg);

/// Inner iterations completed at `t`. Time inside the restore window counts
/// as no progress; the result is clamped to [start_progress, total_work].
std::int64_t progress_at(const Task& task, SimTime t, const ExecSegment& segment);

/// Mixed-radix decomposition of `progress`. At progress == total the
/// outermost variable sits one step past its last value (loop exit).
LoopIndex index_of(std::int64_t progress, const LoopDims& dims);

/// Inverse of index_of. Throws OutOfRange for a tuple outside `dims`.
std::int64_t linearize(const LoopIndex& index, const LoopDims& dims);

/// Context holding the loop variables at `progress`. A variable is flagged as
/// saved once its own checkpoint has been written at least once.
Context make_context(std::int64_t progress, const LoopDims& dims, int valid);

/// What a preemption at `t` leaves behind in the context store.
struct CheckpointState {
  std::int64_t progress = 0;  ///< iterations done at the reset instant
  std::int64_t durable = 0;   ///< iterations recoverable from the context
  bool torn = false;          ///< the reset interrupted a checkpoint write
};

CheckpointState checkpoint_state_at(const Task& task, SimTime t, const ExecSegment& segment,
                                    const ExecConfig& cfg);

/// Stops a running task at `t`: stores its context, rolls completed_work to the
/// durable progress, closes `segment` and moves the task to Preempted.
/// Throws NotRunning if the task is not Running.
Context preempt(Task& task, SimTime t, ExecSegment& segment, const ExecConfig& cfg);

/// Progress a resumed kernel restarts from. Unsaved variables take their
/// initial value. Throws CorruptContext if the tuple does not fit `dims`.
std::int64_t resume_progress(const Context& ctx, const LoopDims& dims);

}  // namespace fpgasched
