#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "roadhazard/camera_geometry.hpp"
#include "roadhazard/eval_metrics.hpp"
#include "roadhazard/imu_filtering.hpp"

namespace roadhazard {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Annotations: one `<image_id>.txt` per image, lines `category_id xc yc w h`
// with every value normalized to [0, 1].

struct AnnotationSet {
  std::vector<GroundTruthBox> boxes;
  std::vector<ImageId> image_ids;  // every annotation file, sorted
};

using ImageSizes = std::map<ImageId, FrameSize>;

std::vector<GroundTruthBox> parse_annotations(std::istream& in, const std::string& name, ImageId image_id,
                                              FrameSize size);

/// sizes overrides default_size per image.
AnnotationSet load_annotations(const fs::path& dir, FrameSize default_size, const ImageSizes& sizes = {});

void write_annotations(const fs::path& dir, const AnnotationSet& set, FrameSize default_size,
                       const ImageSizes& sizes = {});

// ---------------------------------------------------------------------------
// Depth frames: 16-bit single-channel image files (PNG or PGM).

DepthFrame load_depth_frame(const fs::path& path, double depth_scale, FrameId frame_id = 0);
void save_depth_frame(const fs::path& path, const DepthFrame& frame);

// ---------------------------------------------------------------------------
// IMU logs: CSV `t,ax,ay,az` with a header row.

std::vector<AccelSample> parse_imu_log(std::istream& in, const std::string& name);
std::vector<AccelSample> load_imu_log(const fs::path& path);
void write_imu_log(const fs::path& path, const std::vector<AccelSample>& samples);

// ---------------------------------------------------------------------------
// Calibration: `key = value` text. Keys per stream (`depth.` / `color.`):
// width, height, fx, fy, cx, cy, optional coeffs (must be all zero).
// `extrinsics` holds 12 numbers: row-major rotation then translation (m).
// Optional `depth_scale`.

struct Calibration {
  Intrinsics depth;
  Intrinsics color;
  Extrinsics depth_to_color;
  double depth_scale = 0.001;
};

Calibration parse_calibration(std::istream& in, const std::string& name);
Calibration load_calibration(const fs::path& path);
void save_calibration(const fs::path& path, const Calibration& calib);

// ---------------------------------------------------------------------------
// Replay manifest (JSON). Relative paths resolve against the manifest's folder.

struct ManifestFrame {
  FrameId frame_id = 0;
  fs::path color;
  fs::path depth;
  double timestamp = 0.0;
};

struct ReplayManifest {
  std::vector<ManifestFrame> frames;
  fs::path calibration;
  std::optional<fs::path> detections;
  std::optional<fs::path> imu_log;
  bool aligned = false;
};

ReplayManifest load_manifest(const fs::path& path);
void save_manifest(const fs::path& path, const ReplayManifest& manifest);

// ---------------------------------------------------------------------------
// Category map file shared with external producers: lines `<id> <name>`.

/// Throws CategoryError unless the file matches the built-in map exactly.
void verify_category_map(const fs::path& path);

// ---------------------------------------------------------------------------
// Dataset split

struct SplitRatios {
  double train = 0.7;
  double val = 0.2;
  double test = 0.1;
};

struct SplitSizes {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
};

/// Largest-remainder allocation of n items.
SplitSizes split_sizes(std::size_t n, const SplitRatios& ratios);

/// Seeded Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

template <class T>
struct Split {
  std::vector<T> train;
  std::vector<T> val;
  std::vector<T> test;
};

template <class T>
Split<T> split_dataset(const std::vector<T>& ids, const SplitRatios& ratios, std::uint64_t seed) {
  const SplitSizes sizes = split_sizes(ids.size(), ratios);
  const auto order = shuffled_indices(ids.size(), seed);
  Split<T> out;
  out.train.reserve(sizes.train);
  out.val.reserve(sizes.val);
  out.test.reserve(sizes.test);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const T& id = ids[order[i]];
    if (i < sizes.train)
      out.train.push_back(id);
    else if (i < sizes.train + sizes.val)
      out.val.push_back(id);
    else
      out.test.push_back(id);
  }
  return out;
}

}  // namespace roadhazard
