#pragma once

// Domain types shared by the simulator: time, kernels, tasks, contexts and
// reconfigurable regions.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fpgasched {

/// Simulated time in integer microseconds since the start of a run.
using SimTime = std::int64_t;

using TaskId = std::int64_t;
using RegionId = int;
using BitstreamId = int;

inline constexpr SimTime kTicksPerSecond = 1'000'000;

constexpr double to_seconds(SimTime t) { return static_cast<double>(t) / 1e6; }

// Uniform kernel interface budget of the shell. Every kernel is padded with
// dummy arguments up to these counts.
inline constexpr int kIntSlots = 8;
inline constexpr int kFloatSlots = 8;
inline constexpr int kTileSlots = 2;

/// Capacity of a saved context (number of nominated integer variables).
inline constexpr int kContextCapacity = 16;

/// One `for_save` loop level. The extent is read from an integer argument of
/// the task; the loop variable runs init, init+incr, ... (extent values).
struct LoopTemplate {
  int extent_arg = 0;
  std::int64_t init = 0;
  std::int64_t incr = 1;
};

struct KernelSpec {
  std::string id;
  BitstreamId bitstream_id = 0;
  int n_int_args = 0;
  int n_float_args = 0;
  int n_tile_args = 0;
  /// Loop nest, outermost first. Total work is the product of the extents.
  std::vector<LoopTemplate> loops;
  SimTime per_iter_cost = 1;
  /// A durable checkpoint is written every `checkpoint_stride` inner iterations.
  std::int64_t checkpoint_stride = 1;
};

using KernelRef = std::shared_ptr<const KernelSpec>;

/// Dummy argument counts needed to reach the uniform interface.
struct SignaturePadding {
  int dummy_ints = 0;
  int dummy_floats = 0;
  int dummy_tiles = 0;

  friend bool operator==(const SignaturePadding&, const SignaturePadding&) = default;
};

/// Checks a kernel against the shell slot budget. Throws SlotOverflow naming the
/// first argument kind (int, float, tile) that does not fit.
SignaturePadding validate_signature(const KernelSpec& kernel);

enum class TaskState { Pending, Queued, Running, Preempted, Done };

std::string_view to_string(TaskState s);

/// True for the lifecycle edges Pending->Queued->Running->{Done,Preempted} and
/// Preempted->Queued.
bool is_valid_transition(TaskState from, TaskState to);

/// Saved-variable record of a kernel, one per region in the shell.
struct Context {
  int n_vars = 0;
  std::array<std::int64_t, kContextCapacity> var{};
  std::array<std::int64_t, kContextCapacity> init_var{};
  std::array<std::int64_t, kContextCapacity> incr_var{};
  std::array<int, kContextCapacity> saved{};
  int valid = 1;

  friend bool operator==(const Context&, const Context&) = default;
};

struct Task {
  TaskId id = 0;
  KernelRef kernel;
  /// Integer scalar arguments in signature order, e.g. (H, W, iters).
  std::vector<std::int64_t> args;
  int priority = 0;
  SimTime arrival = 0;
  TaskState state = TaskState::Pending;
  std::optional<Context> context;
  std::optional<SimTime> first_launch;
  std::optional<SimTime> finish;
  std::int64_t completed_work = 0;

  /// Moves to `next`, throwing InvalidTransition on an edge outside the lifecycle.
  void transition(TaskState next);
};

enum class RegionState { Idle, Saving, Reconfiguring, Running };

std::string_view to_string(RegionState s);

struct Region {
  RegionId id = 0;
  std::optional<BitstreamId> loaded_bitstream;
  std::optional<TaskId> occupant;
  /// Task committed to this region while it saves a victim context or reconfigures.
  std::optional<TaskId> reserved_for;
  std::optional<SimTime> busy_until;
  RegionState state = RegionState::Idle;
};

enum class VictimRule {
  /// Lowest running priority strictly below the incoming one; ties go to the
  /// most recently started segment, then the lowest region id.
  LowestPriorityLatestStart,
};

struct SchedPolicy {
  bool preemption_enabled = true;
  int n_priorities = 5;
  VictimRule victim_rule = VictimRule::LowestPriorityLatestStart;
};

}  // namespace fpgasched
