#include "roadhazard/depth_fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "roadhazard/error.hpp"
#include "roadhazard/random.hpp"

namespace roadhazard {

void FusionConfig::validate() const {
  if (n_samples < 1) raise(Errc::Config, "n_samples must be at least 1");
  if (!(radius_frac > 0.0 && radius_frac <= 0.5)) raise(Errc::Config, "radius_frac must lie in (0, 0.5]");
  if (!(trim_keep > 0.0 && trim_keep <= 1.0)) raise(Errc::Config, "trim_keep must lie in (0, 1]");
}

std::vector<PixelIndex> sample_points(const BBox& bbox, const FusionConfig& cfg, FrameSize frame) {
  cfg.validate();
  if (frame.width <= 0 || frame.height <= 0) raise(Errc::InvalidArgument, "frame size must be positive");

  // Inclusive pixel extent of the box inside the frame.
  const auto extent = [](double lo, double hi, int size) {
    const int first = std::clamp(static_cast<int>(std::floor(lo)), 0, size - 1);
    const int last = std::clamp(static_cast<int>(std::ceil(hi)) - 1, first, size - 1);
    return std::pair{first, last};
  };
  const auto [u_lo, u_hi] = extent(bbox.x1, bbox.x2, frame.width);
  const auto [v_lo, v_hi] = extent(bbox.y1, bbox.y2, frame.height);

  const double cu = 0.5 * (bbox.x1 + bbox.x2);
  const double cv = 0.5 * (bbox.y1 + bbox.y2);
  const auto to_pixel = [&](double u, double v) {
    return PixelIndex{std::clamp(static_cast<int>(std::floor(u)), u_lo, u_hi),
                      std::clamp(static_cast<int>(std::floor(v)), v_lo, v_hi)};
  };

  std::vector<PixelIndex> points;
  points.reserve(static_cast<std::size_t>(cfg.n_samples));
  points.push_back(to_pixel(cu, cv));

  const double radius = cfg.radius_frac * std::min(bbox.width(), bbox.height());
  std::mt19937_64 rng(cfg.rng_seed);
  for (int i = 1; i < cfg.n_samples; ++i) {
    const double r = radius * std::sqrt(uniform01(rng));
    const double theta = 2.0 * std::numbers::pi * uniform01(rng);
    points.push_back(to_pixel(cu + r * std::cos(theta), cv + r * std::sin(theta)));
  }
  return points;
}

double trimmed_mean(std::span<std::uint16_t> raw, double trim_keep) {
  if (raw.empty()) raise(Errc::InvalidArgument, "trimmed mean of an empty sample");
  std::sort(raw.begin(), raw.end());
  const std::size_t k = raw.size();
  const auto drop = static_cast<std::size_t>(std::floor(static_cast<double>(k) * (1.0 - trim_keep) / 2.0 + 1e-9));
  std::uint64_t sum = 0;
  for (std::size_t i = drop; i < k - drop; ++i) sum += raw[i];
  return static_cast<double>(sum) / static_cast<double>(k - 2 * drop);
}

DepthEstimate robust_depth(const DepthFrame& depth, std::span<const PixelIndex> points, double trim_keep) {
  if (!(trim_keep > 0.0 && trim_keep <= 1.0)) raise(Errc::Config, "trim_keep must lie in (0, 1]");
  std::vector<std::uint16_t> valid;
  valid.reserve(points.size());
  for (const auto& p : points) {
    if (!depth.contains(p.u, p.v)) raise(Errc::OutOfBounds, "depth sample outside the frame");
    if (const auto raw = depth.raw(p.u, p.v); raw != 0) valid.push_back(raw);
  }
  DepthEstimate est;
  est.valid_samples = static_cast<int>(valid.size());
  if (!valid.empty()) est.distance_m = trimmed_mean(valid, trim_keep) * depth.depth_scale;
  return est;
}

std::uint64_t detection_seed(std::uint64_t stream_seed, FrameId frame_id, std::size_t index) noexcept {
  return mix_seed(mix_seed(stream_seed, static_cast<std::uint64_t>(frame_id)), index);
}

std::vector<FusedDetection> fuse(std::span<const Detection> detections, const DepthFrame& depth,
                                 const FusionConfig& cfg) {
  cfg.validate();
  const FrameSize frame{depth.width, depth.height};
  std::vector<FusedDetection> out;
  out.reserve(detections.size());
  FusionConfig local = cfg;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const Detection& det = detections[i];
    local.rng_seed = detection_seed(cfg.rng_seed, det.frame_id, i);
    FusedDetection fused{det, std::nullopt, 0};
    const BBox box = clamp_to_frame(det.bbox, frame);
    if (box.valid()) {
      const auto points = sample_points(box, local, frame);
      const auto est = robust_depth(depth, points, cfg.trim_keep);
      fused.distance_m = est.distance_m;
      fused.valid_samples = est.valid_samples;
    }
    out.push_back(std::move(fused));
  }
  return out;
}

}  // namespace roadhazard
