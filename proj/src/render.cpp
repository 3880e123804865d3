#include <fstream>
#include <map>

#include <fmt/format.h>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "roadhazard/dataset_io.hpp"
#include "roadhazard/error.hpp"
#include "roadhazard/pipeline.hpp"

namespace roadhazard {

namespace {

std::map<FrameId, std::vector<FusedDetection>> load_fused(const fs::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::Io, "cannot open fused detections " + path.string());
  std::map<FrameId, std::vector<FusedDetection>> frames;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line.front() == '#') continue;
    try {
      auto f = parse_fused_record(line, line_no);
      frames[f.detection.frame_id].push_back(f);
    } catch (const Error& e) {
      raise(e.code(), path.string() + ": " + e.what());
    }
  }
  return frames;
}

void draw_label(cv::Mat& img, const std::string& text, cv::Point origin, const cv::Scalar& bg) {
  int baseline = 0;
  const double scale = 0.5;
  const auto size = cv::getTextSize(text, cv::FONT_HERSHEY_SIMPLEX, scale, 1, &baseline);
  origin.y = std::max(origin.y, size.height + 4);
  cv::rectangle(img, {origin.x, origin.y - size.height - 4}, {origin.x + size.width + 4, origin.y + baseline - 2}, bg,
                cv::FILLED);
  cv::putText(img, text, {origin.x + 2, origin.y - 3}, cv::FONT_HERSHEY_SIMPLEX, scale, {255, 255, 255}, 1,
              cv::LINE_AA);
}

}  // namespace

std::size_t run_render(const RenderConfig& cfg) {
  cfg.alert.validate();
  const auto manifest = load_manifest(cfg.manifest);
  const auto fused = load_fused(cfg.fused);
  fs::create_directories(cfg.out_dir);

  const cv::Scalar kNear(0, 0, 220);
  const cv::Scalar kFar(0, 170, 0);
  const cv::Scalar kUnknown(128, 128, 128);

  std::size_t written = 0;
  for (const auto& frame : manifest.frames) {
    cv::Mat img = cv::imread(frame.color.string(), cv::IMREAD_COLOR);
    if (img.empty()) raise(Errc::Format, "cannot decode color frame " + frame.color.string());

    std::optional<std::pair<Category, double>> nearest_warning;
    if (auto it = fused.find(frame.frame_id); it != fused.end()) {
      for (const auto& f : it->second) {
        const auto& b = f.detection.bbox;
        const bool warn = f.distance_m && *f.distance_m <= cfg.alert.threshold_m;
        const cv::Scalar color = !f.distance_m ? kUnknown : (warn ? kNear : kFar);
        cv::rectangle(img, cv::Point(static_cast<int>(b.x1), static_cast<int>(b.y1)),
                      cv::Point(static_cast<int>(b.x2), static_cast<int>(b.y2)), color, 2);
        std::string label = fmt::format("{} {:.2f}", category_name(f.detection.category), f.detection.confidence);
        label += f.distance_m ? fmt::format(" {:.1f} m", *f.distance_m) : std::string(" no depth");
        draw_label(img, label, {static_cast<int>(b.x1), static_cast<int>(b.y1)}, color);
        if (warn && (!nearest_warning || *f.distance_m < nearest_warning->second))
          nearest_warning = std::pair{f.detection.category, *f.distance_m};
      }
    }
    if (nearest_warning) {
      const std::string text = warning_message(nearest_warning->first, nearest_warning->second);
      cv::rectangle(img, {0, 0}, {img.cols, 34}, kNear, cv::FILLED);
      cv::putText(img, text, {10, 24}, cv::FONT_HERSHEY_SIMPLEX, 0.75, {255, 255, 255}, 2, cv::LINE_AA);
    }
    const fs::path out = cfg.out_dir / fmt::format("{}.png", frame.frame_id);
    if (!cv::imwrite(out.string(), img)) raise(Errc::Io, "cannot write " + out.string());
    ++written;
  }
  return written;
}

}  // namespace roadhazard
