#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "roadhazard/camera_geometry.hpp"
#include "roadhazard/detection.hpp"

namespace roadhazard {

struct FusionConfig {
  int n_samples = 24;
  double radius_frac = 0.15;  // disc radius as a fraction of min(bbox w, h)
  double trim_keep = 0.5;     // central fraction of sorted samples averaged
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct PixelIndex {
  int u = 0;
  int v = 0;
  friend bool operator==(const PixelIndex&, const PixelIndex&) = default;
};

struct DepthEstimate {
  std::optional<double> distance_m;
  int valid_samples = 0;
};

struct FusedDetection {
  Detection detection;
  std::optional<double> distance_m;
  int valid_samples = 0;
};

/// Center pixel first, then n_samples-1 uniform draws from the disc around the
/// box center, clamped to the box and frame. Seeded by cfg.rng_seed only.
std::vector<PixelIndex> sample_points(const BBox& bbox, const FusionConfig& cfg, FrameSize frame);

/// Trimmed mean of the non-zero samples, in meters.
DepthEstimate robust_depth(const DepthFrame& depth, std::span<const PixelIndex> points, double trim_keep);

/// Trimmed mean over raw values already known to be valid. Reorders `raw`.
double trimmed_mean(std::span<std::uint16_t> raw, double trim_keep);

/// Per-detection seed derived from the stream seed, frame and detection index.
std::uint64_t detection_seed(std::uint64_t stream_seed, FrameId frame_id, std::size_t index) noexcept;

std::vector<FusedDetection> fuse(std::span<const Detection> detections, const DepthFrame& depth,
                                 const FusionConfig& cfg);

}  // namespace roadhazard
