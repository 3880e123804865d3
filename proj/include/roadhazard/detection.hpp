#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roadhazard/camera_geometry.hpp"
#include "roadhazard/categories.hpp"

namespace roadhazard {

/// Axis-aligned box, corner convention, continuous pixel coordinates.
struct BBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const noexcept { return x2 - x1; }
  double height() const noexcept { return y2 - y1; }
  double area() const noexcept { return width() * height(); }
  bool valid() const noexcept { return x1 < x2 && y1 < y2; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

struct Detection {
  BBox bbox;
  Category category = Category::ManholeCover;
  double confidence = 0.0;
  FrameId frame_id = 0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct FrameSize {
  int width = 0;
  int height = 0;
};

/// Intersection over union; 0 for disjoint or degenerate boxes.
double iou(const BBox& a, const BBox& b) noexcept;

BBox clamp_to_frame(const BBox& box, FrameSize frame) noexcept;

struct PostprocessConfig {
  double conf_thresh = 0.25;
  double nms_iou = 0.45;
};

/// Detector output before filtering, in model-input coordinates.
struct RawCandidate {
  BBox bbox;
  Category category = Category::ManholeCover;
  double confidence = 0.0;
};

// Confidence filter, linear rescale to frame space with clamping, then
// per-category greedy NMS. Output is ordered by descending confidence.
std::vector<Detection> postprocess(std::span<const RawCandidate> raw, const PostprocessConfig& cfg,
                                   FrameSize model_size, FrameSize frame_size, FrameId frame_id = 0);

// Record grammar shared by replay files and the external stream:
//   frame_id category_id confidence x1 y1 x2 y2
Detection parse_detection_record(std::string_view line, std::size_t line_no);
std::string format_detection_record(const Detection& det);

class DetectionSource {
 public:
  virtual ~DetectionSource() = default;

  /// Detections for frame_id. frame_id must not decrease between calls.
  virtual std::vector<Detection> next_detections(FrameId frame_id) = 0;
};

/// File-backed source: returns exactly the recorded detections per frame.
class ReplaySource final : public DetectionSource {
 public:
  /// last_frame extends the recording past its final record; frames beyond it
  /// raise EndOfStream.
  explicit ReplaySource(const std::filesystem::path& path, std::optional<FrameId> last_frame = std::nullopt);
  ReplaySource(std::istream& in, std::string name, std::optional<FrameId> last_frame = std::nullopt);

  std::vector<Detection> next_detections(FrameId frame_id) override;

  std::size_t record_count() const noexcept { return records_; }
  std::optional<FrameId> last_frame() const noexcept { return last_frame_; }

 private:
  void load(std::istream& in, const std::string& name);

  std::map<FrameId, std::vector<Detection>> frames_;
  std::optional<FrameId> last_frame_;
  std::optional<FrameId> last_requested_;
  std::size_t records_ = 0;
};

/// Line-oriented stream with `#frame <id>` block markers.
class StreamSource : public DetectionSource {
 public:
  StreamSource(std::istream& in, std::string name);

  std::vector<Detection> next_detections(FrameId frame_id) override;

 protected:
  StreamSource() = default;
  virtual bool read_line(std::string& line);
  void set_name(std::string name) { name_ = std::move(name); }

 private:
  bool next_line(std::string& line);
  bool read_block_header();
  std::vector<Detection> read_block_records();

  std::istream* in_ = nullptr;
  std::string name_;
  std::size_t line_no_ = 0;
  std::optional<FrameId> block_;       // marker read, records not yet consumed
  std::optional<FrameId> last_block_;  // most recent marker
  std::optional<FrameId> last_requested_;
  std::optional<std::string> lookahead_;
  bool eof_ = false;
};

/// Spawns a producer process and consumes its standard output.
class ProcessSource final : public StreamSource {
 public:
  explicit ProcessSource(const std::string& command);
  ~ProcessSource() override;

  ProcessSource(const ProcessSource&) = delete;
  ProcessSource& operator=(const ProcessSource&) = delete;

 protected:
  bool read_line(std::string& line) override;

 private:
  std::FILE* pipe_ = nullptr;
};

/// "exec:<command>" selects a ProcessSource, anything else is a replay file.
std::unique_ptr<DetectionSource> open_detection_source(const std::string& spec,
                                                       std::optional<FrameId> last_frame = std::nullopt);

}  // namespace roadhazard
