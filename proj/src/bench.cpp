#include <chrono>
#include <cmath>
#include <random>

#include "roadhazard/error.hpp"
#include "roadhazard/pipeline.hpp"
#include "roadhazard/random.hpp"

namespace roadhazard {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kFramePool = 8;

// Depth that grows toward the horizon, as seen by a forward-tilted camera, with
// a few percent of dropouts.
DepthFrame synthetic_depth(FrameSize size, std::mt19937_64& rng, FrameId id) {
  DepthFrame frame(size.width, size.height, 0.001, id);
  for (int v = 0; v < size.height; ++v) {
    const double meters = 1.0 + 9.0 * (1.0 - static_cast<double>(v) / size.height);
    for (int u = 0; u < size.width; ++u) {
      if (uniform01(rng) < 0.03) continue;
      const double jitter = 0.01 * (uniform01(rng) - 0.5);
      frame.raw(u, v) = static_cast<std::uint16_t>(std::lround((meters + jitter) * 1000.0));
    }
  }
  return frame;
}

std::vector<Detection> synthetic_detections(FrameSize size, int count, FrameId id, std::mt19937_64& rng) {
  std::vector<Detection> dets;
  for (int i = 0; i < count; ++i) {
    const double w = 20.0 + 100.0 * uniform01(rng);
    const double h = 20.0 + 80.0 * uniform01(rng);
    const double x = (size.width - w) * uniform01(rng);
    const double y = (size.height - h) * uniform01(rng);
    const auto cat = static_cast<Category>(uniform_below(rng, kCategoryCount));
    dets.push_back({{x, y, x + w, y + h}, cat, 0.25 + 0.75 * uniform01(rng), id});
  }
  return dets;
}

}  // namespace

RunSummary run_bench(const BenchConfig& cfg) {
  if (cfg.size.width <= 0 || cfg.size.height <= 0) raise(Errc::Config, "bench frame size must be positive");
  if (cfg.dets_per_frame < 0) raise(Errc::Config, "detections per frame must be non-negative");
  cfg.fusion.validate();
  cfg.alert.validate();

  // Depth and color streams share the size; the color camera sits 15 mm to the
  // side with a slight yaw, roughly like a consumer RGB-D module.
  Intrinsics depth_intr{cfg.size.width, cfg.size.height, 0.6 * cfg.size.width, 0.6 * cfg.size.width,
                        (cfg.size.width - 1) / 2.0, (cfg.size.height - 1) / 2.0};
  Intrinsics color_intr{cfg.size.width, cfg.size.height, 0.96 * cfg.size.width, 0.96 * cfg.size.width,
                        cfg.size.width / 2.0, cfg.size.height / 2.0};
  Extrinsics ext;
  const double yaw = 0.005;
  ext.rotation = {std::cos(yaw), 0, std::sin(yaw), 0, 1, 0, -std::sin(yaw), 0, std::cos(yaw)};
  ext.translation = {0.015, 0.0, 0.0};

  std::mt19937_64 rng(cfg.seed);
  std::vector<DepthFrame> pool;
  const std::size_t pool_size = std::min(kFramePool, cfg.frames);
  for (std::size_t i = 0; i < pool_size; ++i) pool.push_back(synthetic_depth(cfg.size, rng, static_cast<FrameId>(i)));
  std::vector<std::vector<Detection>> dets;
  dets.reserve(cfg.frames);
  for (std::size_t i = 0; i < cfg.frames; ++i)
    dets.push_back(synthetic_detections(cfg.size, cfg.dets_per_frame, static_cast<FrameId>(i), rng));

  FusionConfig fusion = cfg.fusion;
  fusion.rng_seed = cfg.seed;
  AlertTracker tracker(cfg.alert);
  std::vector<double> latencies;
  latencies.reserve(cfg.frames);
  std::size_t warnings = 0;
  std::size_t detections = 0;

  const auto wall_start = Clock::now();
  for (std::size_t i = 0; i < cfg.frames; ++i) {
    const auto start = Clock::now();
    const DepthFrame aligned = align_depth_to_color(pool[i % pool.size()], depth_intr, color_intr, ext);
    const auto fused = fuse(dets[i], aligned, fusion);
    warnings += tracker.update(fused, static_cast<FrameId>(i)).size();
    detections += fused.size();
    latencies.push_back(std::chrono::duration<double, std::milli>(Clock::now() - start).count());
  }
  const double wall = std::chrono::duration<double>(Clock::now() - wall_start).count();

  RunSummary summary = summarize_latencies(std::move(latencies), wall);
  summary.warnings = warnings;
  summary.detections = detections;
  return summary;
}

}  // namespace roadhazard
