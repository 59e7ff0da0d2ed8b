#include "fpgasched/core_model.hpp"

#include "fpgasched/errors.hpp"

namespace fpgasched {

SignaturePadding validate_signature(const KernelSpec& kernel) {
  auto check = [](const char* kind, int declared, int limit) {
    if (declared < 0) {
      throw InvalidArgs(std::string("negative ") + kind + " argument count");
    }
    if (declared > limit) {
      throw SlotOverflow(kind, declared, limit);
    }
  };
  check("int", kernel.n_int_args, kIntSlots);
  check("float", kernel.n_float_args, kFloatSlots);
  check("tile", kernel.n_tile_args, kTileSlots);
  return SignaturePadding{kIntSlots - kernel.n_int_args, kFloatSlots - kernel.n_float_args,
                          kTileSlots - kernel.n_tile_args};
}

std::string_view to_string(TaskState s) {
  switch (s) {
    case TaskState::Pending: return "Pending";
    case TaskState::Queued: return "Queued";
    case TaskState::Running: return "Running";
    case TaskState::Preempted: return "Preempted";
    case TaskState::Done: return "Done";
  }
  return "?";
}

std::string_view to_string(RegionState s) {
  switch (s) {
    case RegionState::Idle: return "Idle";
    case RegionState::Saving: return "Saving";
    case RegionState::Reconfiguring: return "Reconfiguring";
    case RegionState::Running: return "Running";
  }
  return "?";
}

bool is_valid_transition(TaskState from, TaskState to) {
  switch (from) {
    case TaskState::Pending: return to == TaskState::Queued;
    case TaskState::Queued: return to == TaskState::Running;
    case TaskState::Running: return to == TaskState::Done || to == TaskState::Preempted;
    case TaskState::Preempted: return to == TaskState::Queued;
    case TaskState::Done: return false;
  }
  return false;
}

void Task::transition(TaskState next) {
  if (!is_valid_transition(state, next)) {
    throw InvalidTransition("task " + std::to_string(id) + ": " + std::string(to_string(state)) +
                            " -> " + std::string(to_string(next)));
  }
  state = next;
}

}  // namespace fpgasched
