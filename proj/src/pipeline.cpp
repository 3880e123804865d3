#include "roadhazard/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <thread>

#include <fmt/format.h>

#include "roadhazard/bounded_queue.hpp"
#include "roadhazard/dataset_io.hpp"
#include "roadhazard/error.hpp"

namespace roadhazard {

using Clock = std::chrono::steady_clock;

RunSummary summarize_latencies(std::vector<double> latencies_ms, double wall_s) {
  RunSummary s;
  s.frames = latencies_ms.size();
  s.wall_s = wall_s;
  if (latencies_ms.empty()) return s;
  s.mean_ms = std::accumulate(latencies_ms.begin(), latencies_ms.end(), 0.0) / static_cast<double>(s.frames);
  std::sort(latencies_ms.begin(), latencies_ms.end());
  // nearest-rank percentiles
  const auto rank = [&](double q) {
    const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(s.frames)));
    return latencies_ms[std::clamp<std::size_t>(k, 1, s.frames) - 1];
  };
  s.median_ms = rank(0.5);
  s.p99_ms = rank(0.99);
  s.fps = wall_s > 0.0 ? static_cast<double>(s.frames) / wall_s : 0.0;
  return s;
}

std::string format_fused_record(const FusedDetection& f) {
  const auto& d = f.detection;
  return fmt::format("{} {} {} {} {} {} {} {} {}", d.frame_id, category_id(d.category), d.confidence, d.bbox.x1,
                     d.bbox.y1, d.bbox.x2, d.bbox.y2, f.distance_m ? fmt::format("{}", *f.distance_m) : "-",
                     f.valid_samples);
}

FusedDetection parse_fused_record(std::string_view line, std::size_t line_no) {
  // The first seven fields share the detection grammar.
  std::size_t pos = 0;
  for (int field = 0; field < 7; ++field) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    while (pos < line.size() && line[pos] != ' ') ++pos;
  }
  FusedDetection f;
  f.detection = parse_detection_record(line.substr(0, pos), line_no);
  std::string_view rest = line.substr(pos);
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  const auto sp = rest.find(' ');
  if (sp == std::string_view::npos) raise(Errc::Parse, fmt::format("line {}: expected 9 fields", line_no));
  const auto dist = rest.substr(0, sp);
  auto count = rest.substr(sp + 1);
  while (!count.empty() && (count.back() == '\r' || count.back() == ' ')) count.remove_suffix(1);
  if (dist != "-") {
    double v = 0.0;
    auto [p, ec] = std::from_chars(dist.data(), dist.data() + dist.size(), v);
    if (ec != std::errc() || p != dist.data() + dist.size() || !(v > 0.0))
      raise(Errc::Parse, fmt::format("line {}: bad distance", line_no));
    f.distance_m = v;
  }
  auto [p, ec] = std::from_chars(count.data(), count.data() + count.size(), f.valid_samples);
  if (ec != std::errc() || p != count.data() + count.size() || f.valid_samples < 0)
    raise(Errc::Parse, fmt::format("line {}: bad sample count", line_no));
  return f;
}

std::string format_event_record(const WarningEvent& e) {
  return fmt::format("{} {} {}", e.frame_id, category_id(e.category), e.distance_m);
}

// ---------------------------------------------------------------------------

namespace {

struct FrameWork {
  std::size_t index = 0;
  FrameId frame_id = 0;
  DepthFrame depth;
  std::vector<FusedDetection> fused;
  Clock::time_point started;
};

// Output files are written under temporary names and renamed on success.
class StagedOutput {
 public:
  explicit StagedOutput(const fs::path& dir) : dir_(dir) {
    fs::create_directories(dir_);
    events_.open(tmp(kEventsFile), std::ios::binary | std::ios::trunc);
    fused_.open(tmp(kFusedFile), std::ios::binary | std::ios::trunc);
    if (!events_ || !fused_) {
      discard();
      raise(Errc::Io, "cannot create output files in " + dir_.string());
    }
  }
  ~StagedOutput() {
    if (!committed_) discard();
  }

  std::ofstream& events() { return events_; }
  std::ofstream& fused() { return fused_; }

  void commit() {
    events_.close();
    fused_.close();
    if (!events_ || !fused_) raise(Errc::Io, "failed writing outputs in " + dir_.string());
    fs::rename(tmp(kEventsFile), dir_ / kEventsFile);
    fs::rename(tmp(kFusedFile), dir_ / kFusedFile);
    committed_ = true;
  }

 private:
  fs::path tmp(const char* name) const { return dir_ / (std::string(name) + ".partial"); }
  void discard() {
    events_.close();
    fused_.close();
    std::error_code ec;
    fs::remove(tmp(kEventsFile), ec);
    fs::remove(tmp(kFusedFile), ec);
  }

  fs::path dir_;
  std::ofstream events_;
  std::ofstream fused_;
  bool committed_ = false;
};

struct ReplayContext {
  ReplayManifest manifest;
  Calibration calib;
  std::unique_ptr<DetectionSource> source;
  FusionConfig fusion;
};

DepthFrame load_stage(const ReplayContext& ctx, const ManifestFrame& frame) {
  DepthFrame depth = load_depth_frame(frame.depth, ctx.calib.depth_scale, frame.frame_id);
  if (ctx.manifest.aligned) {
    if (depth.width != ctx.calib.color.width || depth.height != ctx.calib.color.height)
      raise(Errc::Format, frame.depth.string() + ": pre-aligned depth must match the color image size");
    return depth;
  }
  return align_depth_to_color(depth, ctx.calib.depth, ctx.calib.color, ctx.calib.depth_to_color);
}

// Malformed detection records are the producer's protocol violation here.
template <class F>
auto from_source(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == Errc::Parse) raise(Errc::Protocol, std::string("detection source: ") + e.what());
    throw;
  }
}

std::vector<FusedDetection> fuse_stage(ReplayContext& ctx, const FrameWork& work) {
  const auto dets = from_source([&] { return ctx.source->next_detections(work.frame_id); });
  for (const auto& d : dets)
    if (d.frame_id != work.frame_id)
      raise(Errc::Protocol, fmt::format("source returned frame {} for frame {}", d.frame_id, work.frame_id));
  return fuse(dets, work.depth, ctx.fusion);
}

}  // namespace

RunSummary run_replay(const ReplayConfig& cfg) {
  cfg.alert.validate();
  ReplayContext ctx;
  ctx.fusion = cfg.fusion;
  ctx.fusion.rng_seed = cfg.seed;
  ctx.fusion.validate();
  if (cfg.out_dir.empty()) raise(Errc::Config, "replay needs an output directory");

  ctx.manifest = load_manifest(cfg.manifest);
  ctx.calib = load_calibration(ctx.manifest.calibration);
  std::string spec = cfg.detections;
  if (spec.empty()) {
    if (!ctx.manifest.detections) raise(Errc::Config, "no detection source given and none in the manifest");
    spec = ctx.manifest.detections->string();
  }
  const bool exec = spec.rfind("exec:", 0) == 0;
  if (!exec && !fs::is_regular_file(spec)) raise(Errc::Io, "detection replay not found: " + spec);
  std::optional<FrameId> last_frame;
  if (!ctx.manifest.frames.empty()) last_frame = ctx.manifest.frames.back().frame_id;
  ctx.source = from_source([&] { return open_detection_source(spec, last_frame); });

  StagedOutput output(cfg.out_dir);
  AlertTracker tracker(cfg.alert);
  std::vector<double> latencies;
  latencies.reserve(ctx.manifest.frames.size());
  RunSummary totals;

  const auto finish = [&](FrameWork& work) {
    const auto events = tracker.update(work.fused, work.frame_id);
    for (const auto& f : work.fused) output.fused() << format_fused_record(f) << '\n';
    for (const auto& e : events) output.events() << format_event_record(e) << '\n';
    totals.detections += work.fused.size();
    totals.warnings += events.size();
    latencies.push_back(std::chrono::duration<double, std::milli>(Clock::now() - work.started).count());
  };

  const auto wall_start = Clock::now();
  if (!cfg.pipelined) {
    for (std::size_t i = 0; i < ctx.manifest.frames.size(); ++i) {
      const auto& frame = ctx.manifest.frames[i];
      FrameWork work{i, frame.frame_id, {}, {}, Clock::now()};
      work.depth = load_stage(ctx, frame);
      work.fused = fuse_stage(ctx, work);
      finish(work);
    }
  } else {
    BoundedQueue<FrameWork> loaded(cfg.queue_capacity);
    BoundedQueue<FrameWork> fused(cfg.queue_capacity);
    std::mutex err_mu;
    std::exception_ptr error;
    const auto fail = [&](std::exception_ptr e) {
      {
        std::lock_guard lock(err_mu);
        if (!error) error = e;
      }
      loaded.close();
      fused.close();
    };

    std::thread loader([&] {
      try {
        for (std::size_t i = 0; i < ctx.manifest.frames.size(); ++i) {
          const auto& frame = ctx.manifest.frames[i];
          FrameWork work{i, frame.frame_id, {}, {}, Clock::now()};
          work.depth = load_stage(ctx, frame);
          if (!loaded.push(std::move(work))) return;
        }
        loaded.close();
      } catch (...) {
        fail(std::current_exception());
      }
    });
    std::thread fuser([&] {
      try {
        while (auto work = loaded.pop()) {
          work->fused = fuse_stage(ctx, *work);
          work->depth = {};
          if (!fused.push(std::move(*work))) return;
        }
        fused.close();
      } catch (...) {
        fail(std::current_exception());
      }
    });
    try {
      while (auto work = fused.pop()) finish(*work);
    } catch (...) {
      fail(std::current_exception());
    }
    loader.join();
    fuser.join();
    if (error) std::rethrow_exception(error);
  }
  const double wall = std::chrono::duration<double>(Clock::now() - wall_start).count();

  output.commit();
  RunSummary summary = summarize_latencies(std::move(latencies), wall);
  summary.detections = totals.detections;
  summary.warnings = totals.warnings;
  return summary;
}

}  // namespace roadhazard
