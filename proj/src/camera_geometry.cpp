#include "roadhazard/camera_geometry.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "roadhazard/error.hpp"

namespace roadhazard {

void Intrinsics::validate() const {
  if (width <= 0 || height <= 0) raise(Errc::Config, "intrinsics need a positive image size");
  if (!(fx > 0.0) || !(fy > 0.0)) raise(Errc::Config, "focal lengths must be positive");
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height))
    raise(Errc::Config, "principal point must lie inside the image");
}

void Extrinsics::validate() const {
  const auto& r = rotation;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // (R^T R)_ij
      const double dot = r[i] * r[j] + r[3 + i] * r[3 + j] + r[6 + i] * r[6 + j];
      if (std::abs(dot - (i == j ? 1.0 : 0.0)) > 1e-9) raise(Errc::Config, "extrinsic rotation is not orthonormal");
    }
  }
  const double det = r[0] * (r[4] * r[8] - r[5] * r[7]) - r[1] * (r[3] * r[8] - r[5] * r[6]) +
                     r[2] * (r[3] * r[7] - r[4] * r[6]);
  if (std::abs(det - 1.0) > 1e-9) raise(Errc::Config, "extrinsic rotation must have determinant 1");
  for (double t : translation)
    if (!std::isfinite(t)) raise(Errc::Config, "extrinsic translation must be finite");
}

DepthFrame::DepthFrame(int w, int h, double scale, FrameId id)
    : width(w), height(h), values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0),
      depth_scale(scale), frame_id(id) {}

void DepthFrame::validate() const {
  if (width <= 0 || height <= 0) raise(Errc::Format, "depth frame needs a positive size");
  if (values.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    raise(Errc::Format, "depth raster size does not match width*height");
  if (!(depth_scale > 0.0) || !std::isfinite(depth_scale)) raise(Errc::Format, "depth_scale must be positive");
}

Point3 deproject(Pixel pixel, double depth_m, const Intrinsics& intr) {
  if (!(depth_m > 0.0) || !std::isfinite(depth_m)) raise(Errc::InvalidDepth, "deprojection needs depth > 0");
  if (!(pixel.u >= 0.0 && pixel.u <= intr.width - 1.0 && pixel.v >= 0.0 && pixel.v <= intr.height - 1.0))
    raise(Errc::OutOfBounds, "pixel lies outside the frame");
  return {(pixel.u - intr.cx) * depth_m / intr.fx, (pixel.v - intr.cy) * depth_m / intr.fy, depth_m};
}

Pixel project(const Point3& point, const Intrinsics& intr) {
  if (!(point.z > 0.0)) raise(Errc::BehindCamera, "point lies behind the camera");
  return {intr.fx * point.x / point.z + intr.cx, intr.fy * point.y / point.z + intr.cy};
}

Point3 transform(const Extrinsics& ext, const Point3& p) {
  const auto& r = ext.rotation;
  const auto& t = ext.translation;
  return {r[0] * p.x + r[1] * p.y + r[2] * p.z + t[0], r[3] * p.x + r[4] * p.y + r[5] * p.z + t[1],
          r[6] * p.x + r[7] * p.y + r[8] * p.z + t[2]};
}

DepthFrame align_depth_to_color(const DepthFrame& depth, const Intrinsics& depth_intr,
                                const Intrinsics& color_intr, const Extrinsics& depth_to_color) {
  depth.validate();
  depth_intr.validate();
  color_intr.validate();
  depth_to_color.validate();
  if (depth.width != depth_intr.width || depth.height != depth_intr.height)
    raise(Errc::Config, "depth frame size does not match depth intrinsics");

  DepthFrame out(color_intr.width, color_intr.height, depth.depth_scale, depth.frame_id);
  // The output raster doubles as the z-buffer: rounding is monotone, so the
  // smallest quantized value belongs to the nearest surface. 0 is untouched.
  auto& zbuf = out.values;

  const auto& r = depth_to_color.rotation;
  const auto& t = depth_to_color.translation;
  const double scale = depth.depth_scale;
  const double max_raw = std::numeric_limits<std::uint16_t>::max();
  const double out_w = out.width;
  const double out_h = out.height;

  // A depth pixel's ray is z * (a_u, b_v, 1); after rotation it is
  // z * (b_v * R[:,1] + R[:,2] + a_u * R[:,0]). The row part is hoisted.
  std::vector<double> col_a(static_cast<std::size_t>(depth.width));
  for (int u = 0; u < depth.width; ++u) col_a[u] = (u - depth_intr.cx) / depth_intr.fx;

  for (int v = 0; v < depth.height; ++v) {
    const double b = (v - depth_intr.cy) / depth_intr.fy;
    const double row_x = b * r[1] + r[2];
    const double row_y = b * r[4] + r[5];
    const double row_z = b * r[7] + r[8];
    const std::uint16_t* src = &depth.values[static_cast<std::size_t>(v) * depth.width];
    for (int u = 0; u < depth.width; ++u) {
      const std::uint16_t raw = src[u];
      if (raw == 0) continue;
      const double z = raw * scale;
      const double a = col_a[u];
      const double px = z * (row_x + a * r[0]) + t[0];
      const double py = z * (row_y + a * r[3]) + t[1];
      const double pz = z * (row_z + a * r[6]) + t[2];
      if (!(pz > 0.0)) continue;
      const double inv = 1.0 / pz;
      // x + 0.5 truncated equals round-half-up once x + 0.5 is known to be >= 0.
      const double fu = color_intr.fx * px * inv + color_intr.cx + 0.5;
      const double fv = color_intr.fy * py * inv + color_intr.cy + 0.5;
      if (!(fu >= 0.0 && fv >= 0.0 && fu < out_w && fv < out_h)) continue;
      const double fq = pz / scale + 0.5;
      if (!(fq >= 1.0 && fq < max_raw + 1.0)) continue;
      const std::size_t idx = static_cast<std::size_t>(fv) * out.width + static_cast<std::size_t>(fu);
      const auto q = static_cast<std::uint16_t>(fq);
      if (zbuf[idx] == 0 || q < zbuf[idx]) zbuf[idx] = q;
    }
  }
  return out;
}

}  // namespace roadhazard
