#include "roadhazard/roadhazard.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <new>
#include <string>
#include <vector>

#include "roadhazard/camera_geometry.hpp"
#include "roadhazard/dataset_io.hpp"
#include "roadhazard/depth_fusion.hpp"
#include "roadhazard/detection.hpp"
#include "roadhazard/error.hpp"
#include "roadhazard/eval_metrics.hpp"
#include "roadhazard/imu_filtering.hpp"
#include "roadhazard/pipeline.hpp"
#include "roadhazard/proximity_alert.hpp"

namespace rh = roadhazard;

struct rh_vibration_filter {
  rh::VibrationFilter filter;
};

struct rh_depth_frame {
  rh::DepthFrame frame;
};

struct rh_detection_source {
  std::unique_ptr<rh::DetectionSource> source;
  std::vector<rh_detection> last;
};

struct rh_alert_tracker {
  rh::AlertTracker tracker;
  std::vector<rh_warning_event> last;
};

struct rh_eval_report {
  rh::EvalReport report;
  std::string table;
  std::string json;
};

struct rh_imu_analysis {
  rh::ImuAnalysis analysis;
  std::string table;
};

namespace {

thread_local std::string g_last_error;

rh_status to_status(rh::Errc code) {
  switch (code) {
    case rh::Errc::InvalidArgument: return RH_ERR_INVALID_ARGUMENT;
    case rh::Errc::InvalidSample: return RH_ERR_INVALID_SAMPLE;
    case rh::Errc::GravityNotReady: return RH_ERR_GRAVITY_NOT_READY;
    case rh::Errc::EmptyWindow: return RH_ERR_EMPTY_WINDOW;
    case rh::Errc::InvalidDepth: return RH_ERR_INVALID_DEPTH;
    case rh::Errc::OutOfBounds: return RH_ERR_OUT_OF_BOUNDS;
    case rh::Errc::BehindCamera: return RH_ERR_BEHIND_CAMERA;
    case rh::Errc::EndOfStream: return RH_ERR_END_OF_STREAM;
    case rh::Errc::Parse: return RH_ERR_PARSE;
    case rh::Errc::Protocol: return RH_ERR_PROTOCOL;
    case rh::Errc::Category: return RH_ERR_CATEGORY;
    case rh::Errc::Range: return RH_ERR_RANGE;
    case rh::Errc::Format: return RH_ERR_FORMAT;
    case rh::Errc::Order: return RH_ERR_ORDER;
    case rh::Errc::Config: return RH_ERR_CONFIG;
    case rh::Errc::Io: return RH_ERR_IO;
  }
  return RH_ERR_INTERNAL;
}

rh_status fail(rh_status status, const char* what) {
  g_last_error = what;
  return status;
}

template <class F>
rh_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return RH_OK;
  } catch (const rh::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(RH_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(RH_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RH_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RH_ERR_INTERNAL, "unknown error");
  }
}

#define RH_REQUIRE(cond)                                                       \
  do {                                                                         \
    if (!(cond)) return fail(RH_ERR_INVALID_ARGUMENT, "null or invalid argument: " #cond); \
  } while (0)

rh::Category to_category(int id) {
  auto c = rh::category_from_id(id);
  if (!c) rh::raise(rh::Errc::Category, "unknown category id " + std::to_string(id));
  return *c;
}

rh::BBox to_cpp(const rh_bbox& b) { return {b.x1, b.y1, b.x2, b.y2}; }
rh_bbox to_c(const rh::BBox& b) { return {b.x1, b.y1, b.x2, b.y2}; }

rh::Detection to_cpp(const rh_detection& d) {
  return {to_cpp(d.bbox), to_category(d.category), d.confidence, d.frame_id};
}
rh_detection to_c(const rh::Detection& d) {
  return {to_c(d.bbox), rh::category_id(d.category), d.confidence, d.frame_id};
}

rh::Intrinsics to_cpp(const rh_intrinsics& i) { return {i.width, i.height, i.fx, i.fy, i.cx, i.cy}; }

rh::Extrinsics to_cpp(const rh_extrinsics& e) {
  rh::Extrinsics out;
  std::copy(e.rotation, e.rotation + 9, out.rotation.begin());
  std::copy(e.translation, e.translation + 3, out.translation.begin());
  return out;
}

rh::FusionConfig to_cpp(const rh_fusion_config& c) { return {c.n_samples, c.radius_frac, c.trim_keep, c.rng_seed}; }
rh::AlertConfig to_cpp(const rh_alert_config& c) { return {c.threshold_m, c.clear_margin_m, c.min_consecutive}; }
rh::ImuFilterParams to_cpp(const rh_imu_params& p) { return {p.alpha, p.q, p.r}; }

rh::FusedDetection to_cpp(const rh_fused_detection& f) {
  rh::FusedDetection out{to_cpp(f.detection), std::nullopt, f.valid_samples};
  if (f.has_distance) out.distance_m = f.distance_m;
  return out;
}
rh_fused_detection to_c(const rh::FusedDetection& f) {
  return {to_c(f.detection), f.distance_m ? 1 : 0, f.distance_m.value_or(0.0), f.valid_samples};
}

void fill_summary(const rh::RunSummary& s, rh_run_summary* out) {
  *out = {s.frames, s.detections, s.warnings, s.mean_ms, s.median_ms, s.p99_ms, s.fps, s.wall_s};
}

rh_eval_report* make_report(rh::EvalReport report) {
  auto* r = new rh_eval_report{std::move(report), {}, {}};
  r->table = rh::render_table(r->report);
  r->json = rh::render_json(r->report);
  return r;
}

}  // namespace

extern "C" {

RH_API const char* rh_version(void) { return "0.1.0"; }

RH_API const char* rh_status_name(rh_status status) {
  switch (status) {
    case RH_OK: return "OK";
    case RH_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case RH_ERR_INVALID_SAMPLE: return "InvalidSample";
    case RH_ERR_GRAVITY_NOT_READY: return "GravityNotReady";
    case RH_ERR_EMPTY_WINDOW: return "EmptyWindow";
    case RH_ERR_INVALID_DEPTH: return "InvalidDepth";
    case RH_ERR_OUT_OF_BOUNDS: return "OutOfBounds";
    case RH_ERR_BEHIND_CAMERA: return "BehindCamera";
    case RH_ERR_END_OF_STREAM: return "EndOfStream";
    case RH_ERR_PARSE: return "ParseError";
    case RH_ERR_PROTOCOL: return "ProtocolError";
    case RH_ERR_CATEGORY: return "CategoryError";
    case RH_ERR_RANGE: return "RangeError";
    case RH_ERR_FORMAT: return "FormatError";
    case RH_ERR_ORDER: return "OrderError";
    case RH_ERR_CONFIG: return "ConfigError";
    case RH_ERR_IO: return "IoError";
    case RH_ERR_INTERNAL: return "InternalError";
  }
  return "Unknown";
}

RH_API const char* rh_last_error(void) { return g_last_error.c_str(); }

RH_API int rh_exit_code(rh_status status) {
  switch (status) {
    case RH_OK: return 0;
    case RH_ERR_IO:
    case RH_ERR_FORMAT:
    case RH_ERR_PARSE:
    case RH_ERR_ORDER:
    case RH_ERR_RANGE:
      return 2;
    case RH_ERR_PROTOCOL:
    case RH_ERR_END_OF_STREAM:
      return 3;
    default:
      return 1;
  }
}

RH_API const char* rh_category_name(int id) {
  auto c = rh::category_from_id(id);
  return c ? rh::category_name(*c).data() : nullptr;
}

RH_API const char* rh_category_label(int id) {
  auto c = rh::category_from_id(id);
  return c ? rh::category_label(*c).data() : nullptr;
}

RH_API int rh_category_count(void) { return static_cast<int>(rh::kCategoryCount); }

RH_API void rh_imu_params_default(rh_imu_params* out) {
  if (!out) return;
  const rh::ImuFilterParams p;
  *out = {p.alpha, p.q, p.r};
}

RH_API void rh_fusion_config_default(rh_fusion_config* out) {
  if (!out) return;
  const rh::FusionConfig c;
  *out = {c.n_samples, c.radius_frac, c.trim_keep, c.rng_seed};
}

RH_API void rh_alert_config_default(rh_alert_config* out) {
  if (!out) return;
  const rh::AlertConfig c;
  *out = {c.threshold_m, c.clear_margin_m, c.min_consecutive};
}

// ---- IMU -------------------------------------------------------------------

RH_API rh_status rh_vibration_filter_create(const rh_imu_params* params, rh_vibration_filter** out) {
  RH_REQUIRE(params && out);
  return guarded([&] { *out = new rh_vibration_filter{rh::VibrationFilter(to_cpp(*params))}; });
}

RH_API rh_status rh_vibration_filter_push(rh_vibration_filter* filter, const rh_accel_sample* sample,
                                          rh_vibration_point* out) {
  RH_REQUIRE(filter && sample && out);
  return guarded([&] {
    const auto p = filter->filter.push({sample->t, sample->ax, sample->ay, sample->az});
    *out = {p.t, p.raw, p.smoothed};
  });
}

RH_API void rh_vibration_filter_destroy(rh_vibration_filter* filter) { delete filter; }

RH_API rh_status rh_vibration_metrics(const rh_vibration_point* window, size_t n, double* peak, double* rms) {
  RH_REQUIRE((window || n == 0) && peak && rms);
  return guarded([&] {
    std::vector<rh::VibrationPoint> pts;
    pts.reserve(n);
    for (size_t i = 0; i < n; ++i) pts.push_back({window[i].t, window[i].raw, window[i].smoothed});
    const auto m = rh::vibration_metrics(pts);
    *peak = m.peak;
    *rms = m.rms;
  });
}

// ---- geometry --------------------------------------------------------------

RH_API rh_status rh_deproject(double u, double v, double depth_m, const rh_intrinsics* intr, double out_xyz[3]) {
  RH_REQUIRE(intr && out_xyz);
  return guarded([&] {
    const auto p = rh::deproject({u, v}, depth_m, to_cpp(*intr));
    out_xyz[0] = p.x;
    out_xyz[1] = p.y;
    out_xyz[2] = p.z;
  });
}

RH_API rh_status rh_project(const double xyz[3], const rh_intrinsics* intr, double out_uv[2]) {
  RH_REQUIRE(xyz && intr && out_uv);
  return guarded([&] {
    const auto px = rh::project({xyz[0], xyz[1], xyz[2]}, to_cpp(*intr));
    out_uv[0] = px.u;
    out_uv[1] = px.v;
  });
}

RH_API rh_status rh_depth_frame_create(int width, int height, double depth_scale, const uint16_t* values,
                                       rh_depth_frame** out) {
  RH_REQUIRE(out && width > 0 && height > 0);
  return guarded([&] {
    auto* f = new rh_depth_frame{rh::DepthFrame(width, height, depth_scale)};
    if (values) std::memcpy(f->frame.values.data(), values, f->frame.values.size() * sizeof(uint16_t));
    try {
      f->frame.validate();
    } catch (...) {
      delete f;
      throw;
    }
    *out = f;
  });
}

RH_API rh_status rh_depth_frame_load(const char* path, double depth_scale, rh_depth_frame** out) {
  RH_REQUIRE(path && out);
  return guarded([&] { *out = new rh_depth_frame{rh::load_depth_frame(path, depth_scale)}; });
}

RH_API rh_status rh_depth_frame_save(const rh_depth_frame* frame, const char* path) {
  RH_REQUIRE(frame && path);
  return guarded([&] { rh::save_depth_frame(path, frame->frame); });
}

RH_API int rh_depth_frame_width(const rh_depth_frame* frame) { return frame ? frame->frame.width : 0; }
RH_API int rh_depth_frame_height(const rh_depth_frame* frame) { return frame ? frame->frame.height : 0; }
RH_API double rh_depth_frame_scale(const rh_depth_frame* frame) { return frame ? frame->frame.depth_scale : 0.0; }
RH_API const uint16_t* rh_depth_frame_data(const rh_depth_frame* frame) {
  return frame ? frame->frame.values.data() : nullptr;
}

RH_API rh_status rh_depth_frame_align(const rh_depth_frame* depth, const rh_intrinsics* depth_intr,
                                      const rh_intrinsics* color_intr, const rh_extrinsics* depth_to_color,
                                      rh_depth_frame** out) {
  RH_REQUIRE(depth && depth_intr && color_intr && depth_to_color && out);
  return guarded([&] {
    *out = new rh_depth_frame{
        rh::align_depth_to_color(depth->frame, to_cpp(*depth_intr), to_cpp(*color_intr), to_cpp(*depth_to_color))};
  });
}

RH_API void rh_depth_frame_destroy(rh_depth_frame* frame) { delete frame; }

// ---- detections ------------------------------------------------------------

RH_API rh_status rh_postprocess(const rh_detection* raw, size_t n, double conf_thresh, double nms_iou, int model_w,
                                int model_h, int frame_w, int frame_h, rh_detection* out, size_t* out_n) {
  RH_REQUIRE((raw || n == 0) && (out || n == 0) && out_n);
  return guarded([&] {
    std::vector<rh::RawCandidate> cands;
    cands.reserve(n);
    for (size_t i = 0; i < n; ++i) cands.push_back({to_cpp(raw[i].bbox), to_category(raw[i].category), raw[i].confidence});
    const int64_t frame_id = n ? raw[0].frame_id : 0;
    const auto kept = rh::postprocess(cands, {conf_thresh, nms_iou}, {model_w, model_h}, {frame_w, frame_h}, frame_id);
    for (size_t i = 0; i < kept.size(); ++i) out[i] = to_c(kept[i]);
    *out_n = kept.size();
  });
}

RH_API rh_status rh_detection_source_open(const char* spec, int64_t last_frame, rh_detection_source** out) {
  RH_REQUIRE(spec && out);
  return guarded([&] {
    std::optional<rh::FrameId> last;
    if (last_frame >= 0) last = last_frame;
    *out = new rh_detection_source{rh::open_detection_source(spec, last), {}};
  });
}

RH_API rh_status rh_detection_source_next(rh_detection_source* source, int64_t frame_id, const rh_detection** dets,
                                          size_t* n) {
  RH_REQUIRE(source && dets && n);
  return guarded([&] {
    const auto got = source->source->next_detections(frame_id);
    source->last.clear();
    for (const auto& d : got) source->last.push_back(to_c(d));
    *dets = source->last.data();
    *n = source->last.size();
  });
}

RH_API void rh_detection_source_destroy(rh_detection_source* source) { delete source; }

// ---- fusion and alerts -----------------------------------------------------

RH_API rh_status rh_fuse(const rh_detection* dets, size_t n, const rh_depth_frame* depth, const rh_fusion_config* cfg,
                         rh_fused_detection* out) {
  RH_REQUIRE((dets || n == 0) && depth && cfg && (out || n == 0));
  return guarded([&] {
    std::vector<rh::Detection> in;
    in.reserve(n);
    for (size_t i = 0; i < n; ++i) in.push_back(to_cpp(dets[i]));
    const auto fused = rh::fuse(in, depth->frame, to_cpp(*cfg));
    for (size_t i = 0; i < fused.size(); ++i) out[i] = to_c(fused[i]);
  });
}

RH_API rh_status rh_alert_tracker_create(const rh_alert_config* cfg, rh_alert_tracker** out) {
  RH_REQUIRE(cfg && out);
  return guarded([&] { *out = new rh_alert_tracker{rh::AlertTracker(to_cpp(*cfg)), {}}; });
}

RH_API rh_status rh_alert_tracker_update(rh_alert_tracker* tracker, const rh_fused_detection* fused, size_t n,
                                         int64_t frame_id, const rh_warning_event** events, size_t* n_events) {
  RH_REQUIRE(tracker && (fused || n == 0) && events && n_events);
  return guarded([&] {
    std::vector<rh::FusedDetection> in;
    in.reserve(n);
    for (size_t i = 0; i < n; ++i) in.push_back(to_cpp(fused[i]));
    const auto got = tracker->tracker.update(in, frame_id);
    tracker->last.clear();
    for (const auto& e : got) {
      rh_warning_event ev{e.frame_id, rh::category_id(e.category), e.distance_m, {}};
      std::strncpy(ev.message, e.message.c_str(), RH_MESSAGE_CAPACITY - 1);
      tracker->last.push_back(ev);
    }
    *events = tracker->last.data();
    *n_events = tracker->last.size();
  });
}

RH_API void rh_alert_tracker_destroy(rh_alert_tracker* tracker) { delete tracker; }

// ---- evaluation ------------------------------------------------------------

RH_API rh_status rh_evaluate(const rh_detection* dets, size_t n_dets, const rh_ground_truth* gts, size_t n_gts,
                             rh_interp interp, rh_eval_report** out) {
  RH_REQUIRE((dets || n_dets == 0) && (gts || n_gts == 0) && out);
  return guarded([&] {
    std::vector<rh::Detection> d;
    for (size_t i = 0; i < n_dets; ++i) d.push_back(to_cpp(dets[i]));
    std::vector<rh::GroundTruthBox> g;
    for (size_t i = 0; i < n_gts; ++i) g.push_back({gts[i].image_id, to_cpp(gts[i].bbox), to_category(gts[i].category)});
    rh::EvalOptions opts;
    opts.interp = interp == RH_INTERP_101PT ? rh::Interpolation::Point101 : rh::Interpolation::AllPoint;
    *out = make_report(rh::evaluate(d, g, opts));
  });
}

RH_API rh_status rh_evaluate_files(const char* pred_path, const char* gt_dir, int image_w, int image_h,
                                   rh_interp interp, rh_eval_report** out) {
  RH_REQUIRE(pred_path && gt_dir && out);
  return guarded([&] {
    std::ifstream in(pred_path);
    if (!in) rh::raise(rh::Errc::Io, std::string("cannot open predictions ") + pred_path);
    std::vector<rh::Detection> dets;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
      try {
        dets.push_back(rh::parse_detection_record(line, line_no));
      } catch (const rh::Error& e) {
        rh::raise(e.code(), std::string(pred_path) + ": " + e.what());
      }
    }
    const auto gt = rh::load_annotations(gt_dir, {image_w, image_h});
    rh::EvalOptions opts;
    opts.interp = interp == RH_INTERP_101PT ? rh::Interpolation::Point101 : rh::Interpolation::AllPoint;
    opts.images = gt.image_ids;
    *out = make_report(rh::evaluate(dets, gt.boxes, opts));
  });
}

RH_API size_t rh_eval_report_row_count(const rh_eval_report* report) { return report ? report->report.rows.size() : 0; }

RH_API rh_status rh_eval_report_row(const rh_eval_report* report, size_t index, rh_eval_row* out) {
  RH_REQUIRE(report && out && index < report->report.rows.size());
  const auto& r = report->report.rows[index];
  *out = {r.name.c_str(), r.category ? rh::category_id(*r.category) : -1, r.images, r.instances, r.detections,
          r.precision, r.recall, r.ap50, r.ap50_95, r.included ? 1 : 0};
  return RH_OK;
}

RH_API const char* rh_eval_report_table(const rh_eval_report* report) { return report ? report->table.c_str() : ""; }
RH_API const char* rh_eval_report_json(const rh_eval_report* report) { return report ? report->json.c_str() : ""; }
RH_API void rh_eval_report_destroy(rh_eval_report* report) { delete report; }

// ---- dataset ---------------------------------------------------------------

RH_API rh_status rh_split_sizes(size_t n, double train, double val, double test, size_t out_sizes[3]) {
  RH_REQUIRE(out_sizes);
  return guarded([&] {
    const auto s = rh::split_sizes(n, {train, val, test});
    out_sizes[0] = s.train;
    out_sizes[1] = s.val;
    out_sizes[2] = s.test;
  });
}

RH_API rh_status rh_split_indices(size_t n, double train, double val, double test, uint64_t seed, size_t* out_order,
                                  size_t out_sizes[3]) {
  RH_REQUIRE((out_order || n == 0) && out_sizes);
  return guarded([&] {
    std::vector<size_t> ids(n);
    for (size_t i = 0; i < n; ++i) ids[i] = i;
    const auto split = rh::split_dataset(ids, {train, val, test}, seed);
    size_t k = 0;
    for (const auto* part : {&split.train, &split.val, &split.test})
      for (size_t id : *part) out_order[k++] = id;
    out_sizes[0] = split.train.size();
    out_sizes[1] = split.val.size();
    out_sizes[2] = split.test.size();
  });
}

RH_API rh_status rh_verify_category_map(const char* path) {
  RH_REQUIRE(path);
  return guarded([&] { rh::verify_category_map(path); });
}

// ---- pipeline --------------------------------------------------------------

RH_API void rh_replay_options_default(rh_replay_options* out) {
  if (!out) return;
  *out = {};
  rh_fusion_config_default(&out->fusion);
  rh_alert_config_default(&out->alert);
  out->queue_capacity = 4;
}

RH_API rh_status rh_run_replay(const rh_replay_options* opts, rh_run_summary* summary) {
  RH_REQUIRE(opts && opts->manifest && opts->out_dir && summary);
  return guarded([&] {
    rh::ReplayConfig cfg;
    cfg.manifest = opts->manifest;
    cfg.detections = opts->detections ? opts->detections : "";
    cfg.out_dir = opts->out_dir;
    cfg.fusion = to_cpp(opts->fusion);
    cfg.alert = to_cpp(opts->alert);
    cfg.seed = opts->seed;
    cfg.pipelined = opts->pipelined != 0;
    cfg.queue_capacity = opts->queue_capacity;
    fill_summary(rh::run_replay(cfg), summary);
  });
}

RH_API void rh_bench_options_default(rh_bench_options* out) {
  if (!out) return;
  const rh::BenchConfig c;
  *out = {};
  out->frames = c.frames;
  out->dets_per_frame = c.dets_per_frame;
  out->width = c.size.width;
  out->height = c.size.height;
  out->seed = c.seed;
  rh_fusion_config_default(&out->fusion);
  rh_alert_config_default(&out->alert);
}

RH_API rh_status rh_run_bench(const rh_bench_options* opts, rh_run_summary* summary) {
  RH_REQUIRE(opts && summary);
  return guarded([&] {
    rh::BenchConfig cfg;
    cfg.frames = opts->frames;
    cfg.dets_per_frame = opts->dets_per_frame;
    cfg.size = {opts->width, opts->height};
    cfg.seed = opts->seed;
    cfg.fusion = to_cpp(opts->fusion);
    cfg.alert = to_cpp(opts->alert);
    fill_summary(rh::run_bench(cfg), summary);
  });
}

RH_API rh_status rh_imu_analyze_file(const char* log_path, const rh_imu_params* params, double window_s,
                                     rh_imu_analysis** out) {
  RH_REQUIRE(log_path && params && out);
  return guarded([&] {
    const auto samples = rh::load_imu_log(log_path);
    auto* a = new rh_imu_analysis{rh::analyze_imu(samples, to_cpp(*params), window_s), {}};
    a->table = rh::render_window_table(a->analysis.windows);
    *out = a;
  });
}

RH_API size_t rh_imu_analysis_sample_count(const rh_imu_analysis* analysis) {
  return analysis ? analysis->analysis.series.size() : 0;
}

RH_API void rh_imu_analysis_overall(const rh_imu_analysis* analysis, double* peak, double* rms) {
  if (!analysis) return;
  if (peak) *peak = analysis->analysis.overall.peak;
  if (rms) *rms = analysis->analysis.overall.rms;
}

RH_API rh_status rh_imu_analysis_write(const rh_imu_analysis* analysis, const char* series_path,
                                       const char* windows_path) {
  RH_REQUIRE(analysis);
  return guarded([&] {
    if (series_path) rh::write_vibration_series(series_path, analysis->analysis.series);
    if (windows_path) rh::write_window_table(windows_path, analysis->analysis.windows);
  });
}

RH_API const char* rh_imu_analysis_table(const rh_imu_analysis* analysis) {
  return analysis ? analysis->table.c_str() : "";
}

RH_API const char* rh_imu_compare(const rh_imu_analysis* a, const char* name_a, const rh_imu_analysis* b,
                                  const char* name_b) {
  thread_local std::string text;
  if (!a || !b) return "";
  text = rh::render_imu_comparison(a->analysis, name_a ? name_a : "a", b->analysis, name_b ? name_b : "b");
  return text.c_str();
}

RH_API void rh_imu_analysis_destroy(rh_imu_analysis* analysis) { delete analysis; }

RH_API rh_status rh_run_render(const rh_render_options* opts, size_t* written) {
  RH_REQUIRE(opts && opts->manifest && opts->fused && opts->out_dir && written);
  return guarded([&] {
    rh::RenderConfig cfg{opts->manifest, opts->fused, opts->out_dir, to_cpp(opts->alert)};
    *written = rh::run_render(cfg);
  });
}

}  // extern "C"
