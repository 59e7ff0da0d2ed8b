#pragma once

// Reproducible random workloads: uniform arrivals over [0, T], uniform
// priorities, kernels and image sizes.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fpgasched/core_model.hpp"

namespace fpgasched {

/// SplitMix64 (Steele, Lea, Flood 2014). 64-bit state, fixed output sequence on
/// every platform, which keeps workloads and traces portable.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Unbiased integer in [0, bound) by rejection. `bound` must be > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

inline constexpr BitstreamId kMedianBlurBitstream = 0;
inline constexpr BitstreamId kGaussianBlurBitstream = 1;

inline constexpr SimTime kMedianBlurCost = 2;    // us per pixel-iteration
inline constexpr SimTime kGaussianBlurCost = 3;  // us per pixel

/// Median blur: tiles (in, out), ints (H, W, iters), loops k x row x col.
KernelRef median_blur(SimTime per_iter_cost = kMedianBlurCost, std::int64_t checkpoint_stride = 1);
/// Gaussian blur: same interface and loop nest as the median blur, own bitstream.
KernelRef gaussian_blur(SimTime per_iter_cost = kGaussianBlurCost,
                        std::int64_t checkpoint_stride = 1);

struct MenuEntry {
  KernelRef kernel;
  std::int64_t iters = 1;
};

/// Median blur with 1, 2 or 3 iterations and a single-iteration Gaussian blur.
std::vector<MenuEntry> default_menu(SimTime median_cost = kMedianBlurCost,
                                  SimTime gaussian_cost = kGaussianBlurCost,
                                  std::int64_t checkpoint_stride = 1);

/// Kernel with the given id from `menu`, or nullptr.
KernelRef find_kernel(const std::vector<MenuEntry>& menu, std::string_view id);

struct ImageSize {
  std::int64_t h = 0;
  std::int64_t w = 0;

  friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

struct WorkloadConfig {
  std::uint64_t seed = 15;
  int n_tasks = 30;
  SimTime arrival_window = 6 * kTicksPerSecond;
  std::vector<ImageSize> sizes{{600, 600}};
  int n_priorities = 5;
  std::vector<MenuEntry> menu = default_menu();
};

/// Tasks sorted by (arrival, id). Ids are assigned in generation order.
std::vector<Task> generate(const WorkloadConfig& cfg);

// Arrival-window presets (T minutes): busy 0.1, medium 0.5, idle 0.8.
inline constexpr SimTime kBusyWindow = 6 * kTicksPerSecond;
inline constexpr SimTime kMediumWindow = 30 * kTicksPerSecond;
inline constexpr SimTime kIdleWindow = 48 * kTicksPerSecond;

inline const std::vector<std::int64_t> kDefaultSizes{200, 300, 400, 500, 600};

/// "busy" | "medium" | "idle" | seconds (e.g. "12.5"). Throws ConfigError.
SimTime parse_rate(std::string_view text);
/// "600" (square) or "HxW". Throws ConfigError.
ImageSize parse_size(std::string_view text);

}  // namespace fpgasched
