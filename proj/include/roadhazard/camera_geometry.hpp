#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace roadhazard {

using FrameId = std::int64_t;

struct Intrinsics {
  int width = 0;
  int height = 0;
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;

  void validate() const;
};

/// Rigid transform from the depth camera frame to the color camera frame.
/// rotation is row-major.
struct Extrinsics {
  std::array<double, 9> rotation{1, 0, 0, 0, 1, 0, 0, 0, 1};
  std::array<double, 3> translation{0, 0, 0};

  static Extrinsics identity() { return {}; }
  void validate() const;
};

struct Pixel {
  double u = 0.0;
  double v = 0.0;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Row-major 16-bit depth raster. Raw 0 means no depth return.
struct DepthFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> values;
  double depth_scale = 0.001;  // meters per raw unit
  FrameId frame_id = 0;

  DepthFrame() = default;
  DepthFrame(int w, int h, double scale, FrameId id = 0);

  std::uint16_t raw(int u, int v) const { return values[static_cast<std::size_t>(v) * width + u]; }
  std::uint16_t& raw(int u, int v) { return values[static_cast<std::size_t>(v) * width + u]; }
  double meters(int u, int v) const { return raw(u, v) * depth_scale; }
  bool contains(int u, int v) const { return u >= 0 && v >= 0 && u < width && v < height; }

  void validate() const;
};

Point3 deproject(Pixel pixel, double depth_m, const Intrinsics& intr);
Pixel project(const Point3& point, const Intrinsics& intr);
Point3 transform(const Extrinsics& ext, const Point3& p);

// Reprojects every valid depth pixel into the color camera. Collisions keep the
// nearer surface; pixels nothing maps to stay 0.
DepthFrame align_depth_to_color(const DepthFrame& depth, const Intrinsics& depth_intr,
                                const Intrinsics& color_intr, const Extrinsics& depth_to_color);

}  // namespace roadhazard
