#include "roadhazard/detection.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "roadhazard/error.hpp"

namespace roadhazard {

double iou(const BBox& a, const BBox& b) noexcept {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

BBox clamp_to_frame(const BBox& box, FrameSize frame) noexcept {
  const double w = frame.width;
  const double h = frame.height;
  return {std::clamp(box.x1, 0.0, w), std::clamp(box.y1, 0.0, h), std::clamp(box.x2, 0.0, w),
          std::clamp(box.y2, 0.0, h)};
}

std::vector<Detection> postprocess(std::span<const RawCandidate> raw, const PostprocessConfig& cfg,
                                   FrameSize model_size, FrameSize frame_size, FrameId frame_id) {
  if (!(cfg.conf_thresh >= 0.0 && cfg.conf_thresh <= 1.0) || !(cfg.nms_iou >= 0.0 && cfg.nms_iou <= 1.0))
    raise(Errc::InvalidArgument, "postprocess thresholds must lie in [0, 1]");
  if (model_size.width <= 0 || model_size.height <= 0 || frame_size.width <= 0 || frame_size.height <= 0)
    raise(Errc::InvalidArgument, "model and frame sizes must be positive");

  const bool identity = model_size.width == frame_size.width && model_size.height == frame_size.height;
  const double sx = static_cast<double>(frame_size.width) / model_size.width;
  const double sy = static_cast<double>(frame_size.height) / model_size.height;

  std::vector<Detection> kept;
  kept.reserve(raw.size());
  for (const auto& c : raw) {
    if (!(c.confidence >= cfg.conf_thresh)) continue;
    BBox box = c.bbox;
    if (!identity) box = {box.x1 * sx, box.y1 * sy, box.x2 * sx, box.y2 * sy};
    box = clamp_to_frame(box, frame_size);
    if (!box.valid()) continue;
    kept.push_back({box, c.category, std::min(c.confidence, 1.0), frame_id});
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const Detection& a, const Detection& b) { return a.confidence > b.confidence; });

  std::vector<Detection> out;
  out.reserve(kept.size());
  for (const auto& d : kept) {
    const bool suppressed = std::any_of(out.begin(), out.end(), [&](const Detection& k) {
      return k.category == d.category && iou(k.bbox, d.bbox) > cfg.nms_iou;
    });
    if (!suppressed) out.push_back(d);
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
bool parse_number(std::string_view tok, T& out) {
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool is_blank_or_comment(std::string_view line) {
  line = trim(line);
  return line.empty() || line.front() == '#';
}

}  // namespace

Detection parse_detection_record(std::string_view line, std::size_t line_no) {
  const auto fail = [&](const std::string& why) -> Detection {
    raise(Errc::Parse, fmt::format("line {}: {}", line_no, why));
  };
  const auto tok = split_ws(trim(line));
  if (tok.size() != 7) return fail(fmt::format("expected 7 fields, found {}", tok.size()));

  Detection d;
  long long frame = 0;
  long long cat = 0;
  if (!parse_number(tok[0], frame) || frame < 0) return fail("bad frame_id");
  if (!parse_number(tok[1], cat)) return fail("bad category_id");
  auto category = category_from_id(cat);
  if (!category) return fail(fmt::format("category_id {} outside 0-5", cat));
  double v[5];
  for (int i = 0; i < 5; ++i)
    if (!parse_number(tok[2 + i], v[i]) || !std::isfinite(v[i])) return fail("bad numeric field");
  if (!(v[0] >= 0.0 && v[0] <= 1.0)) return fail("confidence outside [0, 1]");
  d.frame_id = frame;
  d.category = *category;
  d.confidence = v[0];
  d.bbox = {v[1], v[2], v[3], v[4]};
  if (!d.bbox.valid()) return fail("box needs x1 < x2 and y1 < y2");
  return d;
}

std::string format_detection_record(const Detection& det) {
  return fmt::format("{} {} {} {} {} {} {}", det.frame_id, category_id(det.category), det.confidence, det.bbox.x1,
                     det.bbox.y1, det.bbox.x2, det.bbox.y2);
}

// ---------------------------------------------------------------------------

ReplaySource::ReplaySource(const std::filesystem::path& path, std::optional<FrameId> last_frame)
    : last_frame_(last_frame) {
  std::ifstream in(path);
  if (!in) raise(Errc::Io, "cannot open detection replay " + path.string());
  load(in, path.string());
}

ReplaySource::ReplaySource(std::istream& in, std::string name, std::optional<FrameId> last_frame)
    : last_frame_(last_frame) {
  load(in, name);
}

void ReplaySource::load(std::istream& in, const std::string& name) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    Detection d;
    try {
      d = parse_detection_record(line, line_no);
    } catch (const Error& e) {
      raise(e.code(), name + ": " + e.what());
    }
    frames_[d.frame_id].push_back(d);
    ++records_;
  }
  if (!frames_.empty()) {
    const FrameId last_recorded = frames_.rbegin()->first;
    last_frame_ = last_frame_ ? std::max(*last_frame_, last_recorded) : last_recorded;
  }
}

std::vector<Detection> ReplaySource::next_detections(FrameId frame_id) {
  if (last_requested_ && frame_id < *last_requested_)
    raise(Errc::Protocol, fmt::format("frame {} requested after frame {}", frame_id, *last_requested_));
  if (!last_frame_ || frame_id > *last_frame_)
    raise(Errc::EndOfStream, fmt::format("frame {} lies beyond the recording", frame_id));
  last_requested_ = frame_id;
  auto it = frames_.find(frame_id);
  if (it == frames_.end()) return {};
  return it->second;
}

// ---------------------------------------------------------------------------

StreamSource::StreamSource(std::istream& in, std::string name) : in_(&in), name_(std::move(name)) {}

bool StreamSource::read_line(std::string& line) { return static_cast<bool>(std::getline(*in_, line)); }

bool StreamSource::next_line(std::string& line) {
  if (lookahead_) {
    line = std::move(*lookahead_);
    lookahead_.reset();
    return true;
  }
  if (eof_ || !read_line(line)) {
    eof_ = true;
    return false;
  }
  ++line_no_;
  return true;
}

// Consumes lines up to and including the next `#frame` marker.
bool StreamSource::read_block_header() {
  std::string line;
  while (next_line(line)) {
    const auto t = trim(line);
    if (t.empty()) continue;
    if (t.substr(0, 6) == "#frame") {
      const auto tok = split_ws(t);
      long long id = 0;
      if (tok.size() != 2 || tok[0] != "#frame" || !parse_number(tok[1], id))
        raise(Errc::Protocol, fmt::format("{}: line {}: malformed frame marker", name_, line_no_));
      if (last_block_ && id <= *last_block_)
        raise(Errc::Protocol, fmt::format("{}: line {}: frame markers must increase", name_, line_no_));
      block_ = id;
      last_block_ = id;
      return true;
    }
    if (t.front() == '#') continue;
    raise(Errc::Protocol, fmt::format("{}: line {}: record outside a frame block", name_, line_no_));
  }
  return false;
}

// Reads the records of the open block; stops before the next marker.
std::vector<Detection> StreamSource::read_block_records() {
  std::vector<Detection> out;
  std::string line;
  while (next_line(line)) {
    const auto t = trim(line);
    if (t.empty()) continue;
    if (t.substr(0, 6) == "#frame") {
      lookahead_ = line;
      break;
    }
    if (t.front() == '#') continue;
    Detection d;
    try {
      d = parse_detection_record(t, line_no_);
    } catch (const Error& e) {
      raise(e.code(), name_ + ": " + e.what());
    }
    if (d.frame_id != *block_)
      raise(Errc::Protocol,
            fmt::format("{}: line {}: record for frame {} inside block {}", name_, line_no_, d.frame_id, *block_));
    out.push_back(d);
  }
  block_.reset();
  return out;
}

std::vector<Detection> StreamSource::next_detections(FrameId frame_id) {
  if (last_requested_ && frame_id < *last_requested_)
    raise(Errc::Protocol, fmt::format("frame {} requested after frame {}", frame_id, *last_requested_));
  last_requested_ = frame_id;

  while (true) {
    if (!block_ && !read_block_header())
      raise(Errc::EndOfStream, fmt::format("{}: stream ended before frame {}", name_, frame_id));
    if (*block_ > frame_id) return {};
    auto records = read_block_records();
    if (last_block_ == frame_id) return records;
    // block for a frame nobody asked for; dropped
  }
}

ProcessSource::ProcessSource(const std::string& command) {
  set_name("exec:" + command);
  pipe_ = ::popen(command.c_str(), "r");
  if (!pipe_) raise(Errc::Io, "cannot start detection producer: " + command);
}

ProcessSource::~ProcessSource() {
  if (pipe_) ::pclose(pipe_);
}

bool ProcessSource::read_line(std::string& line) {
  line.clear();
  char buf[512];
  bool any = false;
  while (std::fgets(buf, sizeof buf, pipe_)) {
    any = true;
    line += buf;
    if (!line.empty() && line.back() == '\n') {
      line.pop_back();
      return true;
    }
  }
  return any;
}

std::unique_ptr<DetectionSource> open_detection_source(const std::string& spec, std::optional<FrameId> last_frame) {
  constexpr std::string_view kExec = "exec:";
  if (spec.compare(0, kExec.size(), kExec) == 0) return std::make_unique<ProcessSource>(spec.substr(kExec.size()));
  return std::make_unique<ReplaySource>(std::filesystem::path(spec), last_frame);
}

}  // namespace roadhazard
