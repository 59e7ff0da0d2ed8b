#include <doctest.h>

#include "fpgasched/core_model.hpp"
#include "fpgasched/errors.hpp"
#include "fpgasched/workload.hpp"

using namespace fpgasched;

TEST_CASE("median blur pads to 5 ints, 8 floats, no tiles") {
  const auto pad = validate_signature(*median_blur());
  CHECK(pad == SignaturePadding{5, 8, 0});
}

TEST_CASE("empty signature pads to the full slot budget") {
  KernelSpec k;
  CHECK(validate_signature(k) == SignaturePadding{8, 8, 2});
}

TEST_CASE("slot overflow names the first offending kind") {
  KernelSpec k;
  k.n_int_args = 9;
  try {
    validate_signature(k);
    FAIL("expected SlotOverflow");
  } catch (const SlotOverflow& e) {
    CHECK(e.kind() == "int");
    CHECK(e.declared() == 9);
    CHECK(e.limit() == 8);
  }
  k.n_int_args = 8;
  k.n_float_args = 9;
  CHECK_THROWS_AS(validate_signature(k), SlotOverflow);
  k.n_float_args = 0;
  k.n_tile_args = 3;
  CHECK_THROWS_AS(validate_signature(k), SlotOverflow);
}

TEST_CASE("declared plus dummy arguments fill every slot") {
  for (int i = 0; i <= kIntSlots; ++i) {
    for (int f = 0; f <= kFloatSlots; ++f) {
      for (int t = 0; t <= kTileSlots; ++t) {
        KernelSpec k;
        k.n_int_args = i;
        k.n_float_args = f;
        k.n_tile_args = t;
        const auto pad = validate_signature(k);
        CHECK(i + pad.dummy_ints == kIntSlots);
        CHECK(f + pad.dummy_floats == kFloatSlots);
        CHECK(t + pad.dummy_tiles == kTileSlots);
      }
    }
  }
}

TEST_CASE("task lifecycle accepts exactly the documented edges") {
  using S = TaskState;
  const S all[] = {S::Pending, S::Queued, S::Running, S::Preempted, S::Done};
  int allowed = 0;
  for (S from : all) {
    for (S to : all) {
      const bool expected = (from == S::Pending && to == S::Queued) ||
                            (from == S::Queued && to == S::Running) ||
                            (from == S::Running && (to == S::Done || to == S::Preempted)) ||
                            (from == S::Preempted && to == S::Queued);
      CHECK(is_valid_transition(from, to) == expected);
      allowed += expected;

      Task t;
      t.state = from;
      if (expected) {
        t.transition(to);
        CHECK(t.state == to);
      } else {
        CHECK_THROWS_AS(t.transition(to), InvalidTransition);
        CHECK(t.state == from);
      }
    }
  }
  CHECK(allowed == 5);
}

TEST_CASE("state names") {
  CHECK(to_string(TaskState::Preempted) == "Preempted");
  CHECK(to_string(RegionState::Reconfiguring) == "Reconfiguring");
}

TEST_CASE("time converts to seconds") {
  CHECK(to_seconds(70'000) == doctest::Approx(0.07));
  CHECK(to_seconds(kTicksPerSecond) == 1.0);
}
