#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roadhazard/detection.hpp"

namespace roadhazard {

using ImageId = FrameId;

struct GroundTruthBox {
  ImageId image_id = 0;
  BBox bbox;
  Category category = Category::ManholeCover;
};

enum class Interpolation {
  AllPoint,  // area under the monotone precision envelope
  Point101,  // mean envelope precision at recall 0, 0.01, ..., 1
};

/// TP/FP flag per detection, indexed like the input. Detections are visited by
/// descending confidence (ties keep input order) and each takes the unmatched
/// ground truth with the highest IoU >= iou_thresh. Inputs are expected to share
/// one image and category.
std::vector<bool> match_detections(std::span<const Detection> dets, std::span<const GroundTruthBox> gts,
                                   double iou_thresh);

/// AP from TP/FP flags ranked by descending confidence.
double average_precision(const std::vector<bool>& ranked_flags, std::size_t n_gt,
                         Interpolation interp = Interpolation::AllPoint);

/// 0.50, 0.55, ..., 0.95
std::vector<double> coco_iou_grid();

struct EvalOptions {
  std::vector<double> iou_grid = coco_iou_grid();
  Interpolation interp = Interpolation::AllPoint;
  /// Images that exist but may carry neither boxes nor detections.
  std::vector<ImageId> images;
};

struct EvalRow {
  std::string name;
  std::optional<Category> category;  // empty for the "All" row
  std::size_t images = 0;
  std::size_t instances = 0;
  std::size_t detections = 0;
  double precision = 0.0;
  double recall = 0.0;
  double ap50 = 0.0;
  double ap50_95 = 0.0;
  bool included = false;  // participates in the "All" average
};

/// "All" first, then one row per category in fixed order.
struct EvalReport {
  std::vector<EvalRow> rows;
  Interpolation interp = Interpolation::AllPoint;

  const EvalRow& all() const { return rows.front(); }
  const EvalRow& row(Category c) const { return rows[1 + category_index(c)]; }
};

EvalReport evaluate(std::span<const Detection> dets, std::span<const GroundTruthBox> gts,
                    const EvalOptions& opts = {});

/// Plain-text table: Class Images Instances P R mAP50 mAP50-95.
std::string render_table(const EvalReport& report);
std::string render_json(const EvalReport& report);

}  // namespace roadhazard
