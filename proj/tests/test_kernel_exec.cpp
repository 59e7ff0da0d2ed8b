#include <doctest.h>

#include <memory>

#include "fpgasched/errors.hpp"
#include "fpgasched/kernel_exec.hpp"
#include "fpgasched/workload.hpp"
#include "oracle/tick_replay.hpp"

using namespace fpgasched;

namespace {

Task make_task(KernelRef k, std::vector<std::int64_t> args) {
  Task t;
  t.kernel = std::move(k);
  t.args = std::move(args);
  return t;
}

Task running(KernelRef k, std::vector<std::int64_t> args) {
  Task t = make_task(std::move(k), std::move(args));
  t.transition(TaskState::Queued);
  t.transition(TaskState::Running);
  return t;
}

KernelRef custom_kernel(SimTime cost, std::int64_t stride, std::vector<LoopTemplate> loops) {
  auto k = std::make_shared<KernelSpec>();
  k->id = "custom";
  k->n_int_args = 3;
  k->loops = std::move(loops);
  k->per_iter_cost = cost;
  k->checkpoint_stride = stride;
  return k;
}

oracle::SegmentParams params(const Task& t, const ExecSegment& seg, const ExecConfig& cfg) {
  return {total_work(t), t.kernel->per_iter_cost, t.kernel->checkpoint_stride, seg.restore,
          seg.start_progress, seg.start, cfg.save_window};
}

}  // namespace

TEST_CASE("total work of the blur kernels") {
  CHECK(total_work(*median_blur(), std::vector<std::int64_t>{600, 600, 3}) == 1'080'000);
  CHECK(total_work(*median_blur(), std::vector<std::int64_t>{1, 1, 1}) == 1);
  CHECK(total_work(*gaussian_blur(), std::vector<std::int64_t>{200, 200, 1}) == 40'000);
}

TEST_CASE("loop extents must be positive and present") {
  CHECK_THROWS_AS(total_work(*median_blur(), std::vector<std::int64_t>{0, 5, 1}), InvalidArgs);
  CHECK_THROWS_AS(total_work(*median_blur(), std::vector<std::int64_t>{5, 5, -1}), InvalidArgs);
  CHECK_THROWS_AS(total_work(*median_blur(), std::vector<std::int64_t>{5, 5}), InvalidArgs);
}

TEST_CASE("finish time") {
  ExecConfig cfg;
  SUBCASE("one iteration left") {
    Task t = make_task(median_blur(), {10, 10, 1});
    t.completed_work = total_work(t) - 1;
    CHECK(finish_time(t, 50, cfg) == 52);  // no context, no restore
  }
  SUBCASE("fresh 600x600 median blur") {
    Task t = make_task(median_blur(), {600, 600, 1});
    CHECK(finish_time(t, 1000, cfg) == 1000 + 720'000);
  }
  SUBCASE("resumed task pays the restore") {
    Task t = make_task(median_blur(3), {4, 5, 2});
    t.context = Context{};
    cfg.restore_overhead = 17;
    CHECK(restore_overhead(t, cfg) == 17);
    CHECK(finish_time(t, 0, cfg) == 17 + 40 * 3);
  }
}

TEST_CASE("progress over a segment") {
  ExecConfig cfg;
  Task t = running(median_blur(4), {3, 5, 2});
  ExecSegment seg = begin_segment(t, 0, 100, cfg);
  CHECK(progress_at(t, 100, seg) == 0);
  CHECK(progress_at(t, 100 + 5 * 4 + 2, seg) == 5);
  CHECK(progress_at(t, finish_time(t, 100, cfg), seg) == 30);
  CHECK(progress_at(t, 1'000'000, seg) == 30);
}

TEST_CASE("progress matches a tick-by-tick replay") {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const SimTime cost = 1 + static_cast<SimTime>(rng.below(5));
    auto k = custom_kernel(cost, 1 + static_cast<std::int64_t>(rng.below(3)), {{0, 0, 1}, {1, 0, 1}});
    Task t = running(k, {1 + static_cast<std::int64_t>(rng.below(6)), 1 + static_cast<std::int64_t>(rng.below(6)), 1});
    ExecConfig cfg;
    cfg.restore_overhead = static_cast<SimTime>(rng.below(10));
    if (rng.below(2)) {
      t.context = Context{};
      t.completed_work = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total_work(t))));
    }
    const SimTime start = static_cast<SimTime>(rng.below(50));
    const ExecSegment seg = begin_segment(t, 0, start, cfg);
    const auto p = params(t, seg, cfg);
    const SimTime end = finish_time(t, start, cfg);
    CHECK(oracle::replay_finish(p) == end);
    for (SimTime at = start; at <= end + 2; ++at) {
      REQUIRE(progress_at(t, at, seg) == oracle::replay_segment(p, at).progress);
    }
  }
}

TEST_CASE("index_of and linearize agree with the enumerated loop nest") {
  SplitMix64 rng(11);
  int nests = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int depth = 1 + static_cast<int>(rng.below(4));
    LoopDims dims;
    std::vector<oracle::Level> levels;
    std::int64_t total = 1;
    for (int d = 0; d < depth; ++d) {
      const std::int64_t extent = 1 + static_cast<std::int64_t>(rng.below(12));
      const std::int64_t init = static_cast<std::int64_t>(rng.below(5)) - 2;
      const std::int64_t incr = 1 + static_cast<std::int64_t>(rng.below(3));
      dims.levels.push_back({extent, init, incr});
      levels.push_back({extent, init, incr});
      total *= extent;
    }
    if (total > 10'000) continue;
    ++nests;
    REQUIRE(dims.total() == total);
    const auto tuples = oracle::enumerate_nest(levels);
    REQUIRE(static_cast<std::int64_t>(tuples.size()) == total);
    for (std::int64_t p = 0; p < total; ++p) {
      const LoopIndex idx = index_of(p, dims);
      REQUIRE(idx == tuples[static_cast<std::size_t>(p)]);
      REQUIRE(linearize(idx, dims) == p);
    }
    // Loop exit: the outermost variable one step past its last value.
    LoopIndex exit_idx;
    for (const auto& l : dims.levels) exit_idx.push_back(l.init);
    exit_idx[0] = dims.levels[0].init + dims.levels[0].extent * dims.levels[0].incr;
    CHECK(index_of(total, dims) == exit_idx);
    CHECK(linearize(exit_idx, dims) == total);
  }
  CHECK(nests > 50);
}

TEST_CASE("index_of examples on the blur nest") {
  const std::int64_t H = 7, W = 9;
  const LoopDims dims = loop_dims(*median_blur(), std::vector<std::int64_t>{H, W, 3});
  const LoopIndex origin = index_of(0, dims);
  CHECK(origin == LoopIndex{0, 1, 1});
  CHECK(index_of(H * W, dims) == LoopIndex{1, 1, 1});
  CHECK(index_of(W + 3, dims) == LoopIndex{0, 2, 4});
}

TEST_CASE("index_of and linearize reject out-of-range input") {
  const LoopDims dims{{{2, 0, 1}, {3, 0, 1}}};
  CHECK_THROWS_AS(index_of(-1, dims), OutOfRange);
  CHECK_THROWS_AS(index_of(7, dims), OutOfRange);
  CHECK_THROWS_AS(linearize({0, 3}, dims), OutOfRange);
  CHECK_THROWS_AS(linearize({0, 1, 2}, dims), OutOfRange);
  CHECK_THROWS_AS(linearize({2, 1}, dims), OutOfRange);  // past the end with inner != init
}

TEST_CASE("preempt at a checkpoint boundary with no save window keeps the checkpoint") {
  ExecConfig cfg;
  cfg.save_window = 0;
  Task t = running(median_blur(2), {4, 5, 1});
  ExecSegment seg = begin_segment(t, 0, 0, cfg);
  const Context ctx = preempt(t, 14, seg, cfg);  // 7 iterations exactly
  const LoopDims dims = loop_dims(*t.kernel, t.args);
  CHECK(ctx.valid == 1);
  CHECK(ctx.var[0] == 0);
  CHECK(ctx.var[1] == 2);
  CHECK(ctx.var[2] == 3);
  CHECK(t.completed_work == 7);
  CHECK(resume_progress(ctx, dims) == 7);
  CHECK(t.state == TaskState::Preempted);
  CHECK(seg.end == 14);
  CHECK(seg.end_reason == SegmentEnd::Preempted);
}

TEST_CASE("preempt during a checkpoint write falls back to the previous save") {
  ExecConfig cfg;
  cfg.save_window = 3;
  Task t = running(median_blur(5), {4, 5, 1});
  ExecSegment seg = begin_segment(t, 0, 0, cfg);
  const SimTime checkpoint_6 = 6 * 5;
  const CheckpointState st = checkpoint_state_at(t, checkpoint_6 + 1, seg, cfg);
  CHECK(st.progress == 6);
  CHECK(st.torn);
  CHECK(st.durable == 5);
  const Context ctx = preempt(t, checkpoint_6 + 1, seg, cfg);
  const LoopDims dims = loop_dims(*t.kernel, t.args);
  CHECK(ctx.valid == 0);
  CHECK(resume_progress(ctx, dims) == 5);
  CHECK(t.completed_work == 5);
  Context expected = make_context(5, dims, 0);
  CHECK(ctx == expected);
}

TEST_CASE("preempt before the first checkpoint saves nothing") {
  ExecConfig cfg;
  Task t = running(median_blur(10), {4, 5, 2});
  ExecSegment seg = begin_segment(t, 0, 0, cfg);
  const Context ctx = preempt(t, 9, seg, cfg);
  for (int i = 0; i < ctx.n_vars; ++i) CHECK(ctx.saved[i] == 0);
  CHECK(resume_progress(ctx, loop_dims(*t.kernel, t.args)) == 0);
  CHECK(t.completed_work == 0);
}

TEST_CASE("saved flags follow the checkpoint of each level") {
  const LoopDims dims = loop_dims(*median_blur(), std::vector<std::int64_t>{3, 4, 2});
  const Context c1 = make_context(1, dims, 1);
  CHECK(c1.saved[2] == 1);
  CHECK(c1.saved[1] == 0);
  CHECK(c1.saved[0] == 0);
  const Context c4 = make_context(4, dims, 1);
  CHECK(c4.saved[1] == 1);
  CHECK(c4.saved[0] == 0);
  CHECK(make_context(12, dims, 1).saved[0] == 1);
}

TEST_CASE("preempt requires a running task") {
  ExecConfig cfg;
  Task t = make_task(median_blur(), {2, 2, 1});
  ExecSegment seg;
  CHECK_THROWS_AS(preempt(t, 0, seg, cfg), NotRunning);
}

TEST_CASE("resume of blank and corrupt contexts") {
  const LoopDims dims = loop_dims(*median_blur(), std::vector<std::int64_t>{3, 4, 2});
  CHECK(resume_progress(Context{}, dims) == 0);
  Context wrong_depth = make_context(5, dims, 1);
  wrong_depth.n_vars = 2;
  CHECK_THROWS_AS(resume_progress(wrong_depth, dims), CorruptContext);
  Context outside = make_context(5, dims, 1);
  outside.var[2] = 99;
  CHECK_THROWS_AS(resume_progress(outside, dims), CorruptContext);
}

TEST_CASE("random preemption chains agree with the replay and never skip work") {
  SplitMix64 rng(99);
  int torn = 0, total_preemptions = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const SimTime cost = 1 + static_cast<SimTime>(rng.below(4));
    const std::int64_t stride = 1 + static_cast<std::int64_t>(rng.below(4));
    auto k = custom_kernel(cost, stride, {{2, 1, 2}, {0, 0, 1}, {1, 3, 1}});
    ExecConfig cfg;
    cfg.save_window = static_cast<SimTime>(rng.below(static_cast<std::uint64_t>(cost * stride + 1)));
    cfg.restore_overhead = static_cast<SimTime>(rng.below(6));
    cfg.preempt_overhead = static_cast<SimTime>(rng.below(6));
    Task t = make_task(k, {1 + static_cast<std::int64_t>(rng.below(5)), 1 + static_cast<std::int64_t>(rng.below(8)),
                           1 + static_cast<std::int64_t>(rng.below(3))});
    const LoopDims dims = loop_dims(*k, t.args);
    t.transition(TaskState::Queued);
    SimTime now = 0;
    for (int hop = 0; hop < 6; ++hop) {
      t.transition(TaskState::Running);
      ExecSegment seg = begin_segment(t, 0, now, cfg);
      CHECK(seg.start_progress < total_work(t));
      const SimTime end = finish_time(t, now, cfg);
      if (end - now < 2) break;
      const SimTime at = now + 1 + static_cast<SimTime>(rng.below(static_cast<std::uint64_t>(end - now - 1)));
      const auto ref = oracle::replay_segment(params(t, seg, cfg), at);
      const std::int64_t before = t.completed_work;
      const Context ctx = preempt(t, at, seg, cfg);
      ++total_preemptions;
      torn += ref.torn;
      REQUIRE(t.completed_work == ref.durable);
      // A segment that wrote no checkpoint leaves the stored record, valid flag included, as it was.
      if (ref.torn) REQUIRE(ctx.valid == 0);
      if (!ref.torn && ref.durable > seg.start_progress) REQUIRE(ctx.valid == 1);
      REQUIRE(ref.progress - ref.durable <= 2 * stride - 1);
      REQUIRE(t.completed_work >= before);
      REQUIRE(resume_progress(ctx, dims) == t.completed_work);
      t.transition(TaskState::Queued);
      now = at + cfg.preempt_overhead;
    }
  }
  CHECK(total_preemptions > 500);
  CHECK(torn > 0);
}

TEST_CASE("preempt and immediate resume delay the finish by the lost work and overheads") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const SimTime cost = 1 + static_cast<SimTime>(rng.below(4));
    ExecConfig cfg;
    cfg.save_window = static_cast<SimTime>(rng.below(static_cast<std::uint64_t>(cost + 1)));
    cfg.restore_overhead = static_cast<SimTime>(rng.below(50));
    cfg.preempt_overhead = static_cast<SimTime>(rng.below(50));
    Task t = running(median_blur(cost), {3, 4 + static_cast<std::int64_t>(rng.below(5)), 2});
    const SimTime start = 10;
    ExecSegment seg = begin_segment(t, 0, start, cfg);
    const SimTime original = finish_time(t, start, cfg);
    const SimTime at = start + 1 + static_cast<SimTime>(rng.below(static_cast<std::uint64_t>(original - start - 1)));
    const CheckpointState st = checkpoint_state_at(t, at, seg, cfg);
    const SimTime partial = at - start - st.progress * cost;  // time spent in the unfinished iteration
    preempt(t, at, seg, cfg);
    t.transition(TaskState::Queued);
    t.transition(TaskState::Running);
    const SimTime resumed = finish_time(t, at + cfg.preempt_overhead, cfg);
    CHECK(resumed - original ==
          (st.progress - st.durable) * cost + partial + cfg.restore_overhead + cfg.preempt_overhead);
  }
}
