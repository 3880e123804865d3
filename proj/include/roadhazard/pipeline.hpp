#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "roadhazard/depth_fusion.hpp"
#include "roadhazard/imu_filtering.hpp"
#include "roadhazard/proximity_alert.hpp"

namespace roadhazard {

namespace fs = std::filesystem;

struct RunSummary {
  std::size_t frames = 0;
  std::size_t detections = 0;
  std::size_t warnings = 0;
  double mean_ms = 0.0;
  double median_ms = 0.0;
  double p99_ms = 0.0;
  double fps = 0.0;
  double wall_s = 0.0;
};

/// Latency statistics over per-frame timings; fps = frames / wall_s.
RunSummary summarize_latencies(std::vector<double> latencies_ms, double wall_s);

struct ReplayConfig {
  fs::path manifest;
  std::string detections;  // replay path or "exec:<cmd>"; empty uses the manifest's
  fs::path out_dir;
  FusionConfig fusion;     // rng_seed is replaced by `seed`
  AlertConfig alert;
  std::uint64_t seed = 0;
  bool pipelined = false;  // one thread per stage over bounded queues
  std::size_t queue_capacity = 4;
};

inline constexpr const char* kEventsFile = "events.txt";
inline constexpr const char* kFusedFile = "fused.txt";

// Writes <out>/events.txt (`frame_id category_id distance_m`) and
// <out>/fused.txt (`frame_id category_id confidence x1 y1 x2 y2 distance_m
// valid_samples`, distance `-` when absent). Both files appear only on success.
RunSummary run_replay(const ReplayConfig& cfg);

std::string format_fused_record(const FusedDetection& fused);
FusedDetection parse_fused_record(std::string_view line, std::size_t line_no);
std::string format_event_record(const WarningEvent& event);

struct BenchConfig {
  std::size_t frames = 1000;
  int dets_per_frame = 5;
  FrameSize size{640, 480};
  std::uint64_t seed = 0;
  FusionConfig fusion;
  AlertConfig alert;
};

/// In-memory align + fuse + assess over synthetic frames; no I/O is timed.
RunSummary run_bench(const BenchConfig& cfg);

struct ImuWindow {
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t samples = 0;
  VibrationMetrics metrics;
};

struct ImuAnalysis {
  std::vector<VibrationPoint> series;
  std::vector<ImuWindow> windows;
  VibrationMetrics overall;
};

/// Windows are consecutive [t0 + k*w, t0 + (k+1)*w) spans from the first sample.
ImuAnalysis analyze_imu(std::span<const AccelSample> samples, const ImuFilterParams& params, double window_s);

void write_vibration_series(const fs::path& path, std::span<const VibrationPoint> series);
void write_window_table(const fs::path& path, std::span<const ImuWindow> windows);
std::string render_window_table(std::span<const ImuWindow> windows);
std::string render_imu_comparison(const ImuAnalysis& a, const std::string& name_a, const ImuAnalysis& b,
                                  const std::string& name_b);

struct RenderConfig {
  fs::path manifest;
  fs::path fused;
  fs::path out_dir;
  AlertConfig alert;
};

/// Draws boxes, labels, distances and a warning banner over each color frame.
/// Returns the number of images written.
std::size_t run_render(const RenderConfig& cfg);

}  // namespace roadhazard
