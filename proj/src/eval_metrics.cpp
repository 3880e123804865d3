#include "roadhazard/eval_metrics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <fmt/format.h>
#include "json.hpp"

#include "roadhazard/error.hpp"

namespace roadhazard {

std::vector<bool> match_detections(std::span<const Detection> dets, std::span<const GroundTruthBox> gts,
                                   double iou_thresh) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].confidence > dets[b].confidence; });

  std::vector<bool> flags(dets.size(), false);
  std::vector<bool> used(gts.size(), false);
  for (std::size_t idx : order) {
    std::size_t best = gts.size();
    double best_iou = -1.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (used[g]) continue;
      const double v = iou(dets[idx].bbox, gts[g].bbox);
      if (v >= iou_thresh && v > best_iou) {
        best = g;
        best_iou = v;
      }
    }
    if (best < gts.size()) {
      used[best] = true;
      flags[idx] = true;
    }
  }
  return flags;
}

double average_precision(const std::vector<bool>& ranked_flags, std::size_t n_gt, Interpolation interp) {
  if (n_gt == 0 || ranked_flags.empty()) return 0.0;
  const std::size_t n = ranked_flags.size();
  std::vector<double> precision(n);
  std::vector<double> recall(n);
  std::size_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ranked_flags[i]) ++tp;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / static_cast<double>(n_gt);
  }
  // Monotone envelope: best precision at this recall or beyond.
  for (std::size_t i = n - 1; i-- > 0;) precision[i] = std::max(precision[i], precision[i + 1]);

  if (interp == Interpolation::AllPoint) {
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ap += (recall[i] - prev_recall) * precision[i];
      prev_recall = recall[i];
    }
    return ap;
  }

  double sum = 0.0;
  std::size_t i = 0;
  for (int j = 0; j <= 100; ++j) {
    const double r = j / 100.0;
    while (i < n && recall[i] < r) ++i;
    if (i == n) break;
    sum += precision[i];
  }
  return sum / 101.0;
}

std::vector<double> coco_iou_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 10; ++i) grid.push_back((50 + 5 * i) / 100.0);
  return grid;
}

namespace {

struct RankedDet {
  const Detection* det;
  std::size_t input_index;
};

// TP/FP flags in rank order for one category at one IoU threshold.
std::vector<bool> ranked_flags(const std::vector<RankedDet>& ranked,
                               const std::map<ImageId, std::vector<GroundTruthBox>>& gts_by_image,
                               double iou_thresh) {
  std::map<ImageId, std::vector<std::size_t>> by_image;  // rank positions per image
  for (std::size_t r = 0; r < ranked.size(); ++r) by_image[ranked[r].det->frame_id].push_back(r);

  std::vector<bool> flags(ranked.size(), false);
  static const std::vector<GroundTruthBox> kNone;
  for (const auto& [image, positions] : by_image) {
    std::vector<Detection> dets;
    dets.reserve(positions.size());
    for (std::size_t r : positions) dets.push_back(*ranked[r].det);
    auto it = gts_by_image.find(image);
    const auto& gts = it == gts_by_image.end() ? kNone : it->second;
    const auto image_flags = match_detections(dets, gts, iou_thresh);
    for (std::size_t k = 0; k < positions.size(); ++k) flags[positions[k]] = image_flags[k];
  }
  return flags;
}

// Precision/recall at the rank prefix with the highest F1 = 2TP / (k + n_gt),
// compared exactly; the earliest prefix wins ties.
std::pair<double, double> max_f1_point(const std::vector<bool>& flags, std::size_t n_gt) {
  if (n_gt == 0) return {0.0, 0.0};
  std::size_t tp = 0;
  std::size_t best_tp = 0;
  std::size_t best_k = 0;
  for (std::size_t k = 1; k <= flags.size(); ++k) {
    if (flags[k - 1]) ++tp;
    // tp / (k + n) > best_tp / (best_k + n)
    if (tp * (best_k + n_gt) > best_tp * (k + n_gt)) {
      best_tp = tp;
      best_k = k;
    }
  }
  if (best_tp == 0) return {0.0, 0.0};
  return {static_cast<double>(best_tp) / static_cast<double>(best_k),
          static_cast<double>(best_tp) / static_cast<double>(n_gt)};
}

}  // namespace

EvalReport evaluate(std::span<const Detection> dets, std::span<const GroundTruthBox> gts, const EvalOptions& opts) {
  if (opts.iou_grid.empty()) raise(Errc::Config, "IoU grid must not be empty");
  for (double t : opts.iou_grid)
    if (!(t >= 0.0 && t <= 1.0)) raise(Errc::Config, "IoU thresholds must lie in [0, 1]");
  for (const auto& d : dets)
    if (category_index(d.category) >= kCategoryCount) raise(Errc::Category, "detection with unknown category");
  for (const auto& g : gts)
    if (category_index(g.category) >= kCategoryCount) raise(Errc::Category, "ground truth with unknown category");

  std::set<ImageId> images(opts.images.begin(), opts.images.end());
  for (const auto& d : dets) images.insert(d.frame_id);
  for (const auto& g : gts) images.insert(g.image_id);

  EvalReport report;
  report.interp = opts.interp;
  EvalRow all;
  all.name = "All";
  all.images = images.size();

  std::vector<EvalRow> rows;
  for (Category c : kAllCategories) {
    EvalRow row;
    row.name = std::string(category_label(c));
    row.category = c;
    row.images = images.size();

    std::map<ImageId, std::vector<GroundTruthBox>> gts_by_image;
    for (const auto& g : gts) {
      if (g.category != c) continue;
      gts_by_image[g.image_id].push_back(g);
      ++row.instances;
    }
    std::vector<RankedDet> ranked;
    for (std::size_t i = 0; i < dets.size(); ++i)
      if (dets[i].category == c) ranked.push_back({&dets[i], i});
    std::sort(ranked.begin(), ranked.end(), [](const RankedDet& a, const RankedDet& b) {
      if (a.det->confidence != b.det->confidence) return a.det->confidence > b.det->confidence;
      if (a.det->frame_id != b.det->frame_id) return a.det->frame_id < b.det->frame_id;
      return a.input_index < b.input_index;
    });
    row.detections = ranked.size();
    row.included = row.instances > 0 || row.detections > 0;

    const auto flags50 = ranked_flags(ranked, gts_by_image, 0.5);
    row.ap50 = average_precision(flags50, row.instances, opts.interp);
    std::tie(row.precision, row.recall) = max_f1_point(flags50, row.instances);
    double sum = 0.0;
    for (double t : opts.iou_grid) sum += average_precision(ranked_flags(ranked, gts_by_image, t), row.instances, opts.interp);
    row.ap50_95 = sum / static_cast<double>(opts.iou_grid.size());

    all.instances += row.instances;
    all.detections += row.detections;
    rows.push_back(std::move(row));
  }

  std::size_t included = 0;
  for (const auto& row : rows) {
    if (!row.included) continue;
    ++included;
    all.precision += row.precision;
    all.recall += row.recall;
    all.ap50 += row.ap50;
    all.ap50_95 += row.ap50_95;
  }
  if (included > 0) {
    const double n = static_cast<double>(included);
    all.precision /= n;
    all.recall /= n;
    all.ap50 /= n;
    all.ap50_95 /= n;
  }
  all.included = included > 0;

  report.rows.push_back(std::move(all));
  for (auto& row : rows) report.rows.push_back(std::move(row));
  return report;
}

std::string render_table(const EvalReport& report) {
  std::string out = fmt::format("{:<22}{:>8}{:>11}{:>8}{:>8}{:>8}{:>10}\n", "Class", "Images", "Instances", "P", "R",
                                "mAP50", "mAP50-95");
  for (const auto& row : report.rows) {
    out += fmt::format("{:<22}{:>8}{:>11}{:>8.3f}{:>8.3f}{:>8.3f}{:>10.3f}\n", row.name, row.images, row.instances,
                       row.precision, row.recall, row.ap50, row.ap50_95);
  }
  return out;
}

std::string render_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["interpolation"] = report.interp == Interpolation::AllPoint ? "allpoint" : "101pt";
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r;
    r["class"] = row.name;
    r["category_id"] = row.category ? nlohmann::ordered_json(category_id(*row.category)) : nlohmann::ordered_json();
    r["images"] = row.images;
    r["instances"] = row.instances;
    r["detections"] = row.detections;
    r["precision"] = row.precision;
    r["recall"] = row.recall;
    r["map50"] = row.ap50;
    r["map50_95"] = row.ap50_95;
    r["included"] = row.included;
    rows.push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

}  // namespace roadhazard
