#include "fpgasched/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <tuple>

#include "fpgasched/errors.hpp"

namespace fpgasched {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  // Reject the low 2^64 mod bound values so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

namespace {

KernelRef blur_kernel(std::string id, BitstreamId bitstream, SimTime cost, std::int64_t stride) {
  KernelSpec k;
  k.id = std::move(id);
  k.bitstream_id = bitstream;
  k.n_int_args = 3;  // H, W, iters
  k.n_float_args = 0;
  k.n_tile_args = 2;  // input, output
  // for_save(k, 0, iters, 1) / for_save(row, 1, H+1, 1) / for_save(col, 1, W+1, 1)
  k.loops = {{2, 0, 1}, {0, 1, 1}, {1, 1, 1}};
  k.per_iter_cost = cost;
  k.checkpoint_stride = stride;
  return std::make_shared<const KernelSpec>(std::move(k));
}

}  // namespace

KernelRef median_blur(SimTime per_iter_cost, std::int64_t checkpoint_stride) {
  return blur_kernel("MedianBlur", kMedianBlurBitstream, per_iter_cost, checkpoint_stride);
}

KernelRef gaussian_blur(SimTime per_iter_cost, std::int64_t checkpoint_stride) {
  return blur_kernel("GaussianBlur", kGaussianBlurBitstream, per_iter_cost, checkpoint_stride);
}

std::vector<MenuEntry> default_menu(SimTime median_cost, SimTime gaussian_cost,
                                  std::int64_t checkpoint_stride) {
  auto mb = median_blur(median_cost, checkpoint_stride);
  auto gb = gaussian_blur(gaussian_cost, checkpoint_stride);
  return {{mb, 1}, {mb, 2}, {mb, 3}, {gb, 1}};
}

KernelRef find_kernel(const std::vector<MenuEntry>& menu, std::string_view id) {
  for (const auto& e : menu) {
    if (e.kernel->id == id) return e.kernel;
  }
  return nullptr;
}

std::vector<Task> generate(const WorkloadConfig& cfg) {
  if (cfg.n_tasks < 0) throw ConfigError("n_tasks must be >= 0");
  if (cfg.arrival_window <= 0) throw ConfigError("arrival window must be > 0");
  if (cfg.menu.empty()) throw ConfigError("kernel menu is empty");
  if (cfg.sizes.empty()) throw ConfigError("size list is empty");
  if (cfg.n_priorities < 1) throw ConfigError("n_priorities must be >= 1");

  SplitMix64 rng(cfg.seed);
  std::vector<Task> tasks;
  tasks.reserve(cfg.n_tasks);
  for (int i = 0; i < cfg.n_tasks; ++i) {
    Task t;
    t.id = i;
    t.arrival = static_cast<SimTime>(rng.below(static_cast<std::uint64_t>(cfg.arrival_window) + 1));
    t.priority = static_cast<int>(rng.below(cfg.n_priorities));
    const MenuEntry& entry = cfg.menu[rng.below(cfg.menu.size())];
    const ImageSize& size = cfg.sizes[rng.below(cfg.sizes.size())];
    t.kernel = entry.kernel;
    t.args = {size.h, size.w, entry.iters};
    tasks.push_back(std::move(t));
  }
  std::stable_sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) {
    return std::tie(a.arrival, a.id) < std::tie(b.arrival, b.id);
  });
  return tasks;
}

SimTime parse_rate(std::string_view text) {
  if (text == "busy") return kBusyWindow;
  if (text == "medium") return kMediumWindow;
  if (text == "idle") return kIdleWindow;
  double seconds = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seconds);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !(seconds > 0)) {
    throw ConfigError("invalid rate '" + std::string(text) + "'");
  }
  return static_cast<SimTime>(std::llround(seconds * 1e6));
}

ImageSize parse_size(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v < 1) {
      throw ConfigError("invalid size '" + std::string(text) + "'");
    }
    return v;
  };
  const auto x = text.find('x');
  if (x == std::string_view::npos) {
    const auto n = parse_int(text);
    return {n, n};
  }
  return {parse_int(text.substr(0, x)), parse_int(text.substr(x + 1))};
}

}  // namespace fpgasched
