/*
 * roadhazard C API
 *
 * Every fallible call returns an rh_status. On failure a description is
 * available from rh_last_error() on the calling thread until the next call.
 * Handles are opaque; each *_create / *_open / *_load has a matching
 * *_destroy that accepts NULL.
 */
#ifndef ROADHAZARD_H
#define ROADHAZARD_H

#include <stddef.h>
#include <stdint.h>

#if defined(RH_BUILDING_LIBRARY)
#define RH_API __attribute__((visibility("default")))
#else
#define RH_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rh_status {
  RH_OK = 0,
  RH_ERR_INVALID_ARGUMENT = 1,
  RH_ERR_INVALID_SAMPLE = 2,
  RH_ERR_GRAVITY_NOT_READY = 3,
  RH_ERR_EMPTY_WINDOW = 4,
  RH_ERR_INVALID_DEPTH = 5,
  RH_ERR_OUT_OF_BOUNDS = 6,
  RH_ERR_BEHIND_CAMERA = 7,
  RH_ERR_END_OF_STREAM = 8,
  RH_ERR_PARSE = 9,
  RH_ERR_PROTOCOL = 10,
  RH_ERR_CATEGORY = 11,
  RH_ERR_RANGE = 12,
  RH_ERR_FORMAT = 13,
  RH_ERR_ORDER = 14,
  RH_ERR_CONFIG = 15,
  RH_ERR_IO = 16,
  RH_ERR_INTERNAL = 17
} rh_status;

RH_API const char* rh_version(void);
RH_API const char* rh_status_name(rh_status status);
RH_API const char* rh_last_error(void);

/* Process exit code for a status: 0 ok, 1 failure/config, 2 I/O, 3 protocol. */
RH_API int rh_exit_code(rh_status status);

/* Category ids 0-5. Both return NULL for an unknown id. */
RH_API const char* rh_category_name(int id);
RH_API const char* rh_category_label(int id);
RH_API int rh_category_count(void);

/* ---- plain data --------------------------------------------------------- */

typedef struct rh_bbox {
  double x1, y1, x2, y2;
} rh_bbox;

typedef struct rh_detection {
  rh_bbox bbox;
  int category;
  double confidence;
  int64_t frame_id;
} rh_detection;

typedef struct rh_fused_detection {
  rh_detection detection;
  int has_distance;
  double distance_m;
  int valid_samples;
} rh_fused_detection;

typedef struct rh_ground_truth {
  int64_t image_id;
  rh_bbox bbox;
  int category;
} rh_ground_truth;

typedef struct rh_intrinsics {
  int width, height;
  double fx, fy, cx, cy;
} rh_intrinsics;

/* rotation is row-major; translation in meters (depth -> color). */
typedef struct rh_extrinsics {
  double rotation[9];
  double translation[3];
} rh_extrinsics;

typedef struct rh_accel_sample {
  double t, ax, ay, az;
} rh_accel_sample;

typedef struct rh_vibration_point {
  double t, raw, smoothed;
} rh_vibration_point;

typedef struct rh_imu_params {
  double alpha, q, r;
} rh_imu_params;

typedef struct rh_fusion_config {
  int n_samples;
  double radius_frac;
  double trim_keep;
  uint64_t rng_seed;
} rh_fusion_config;

typedef struct rh_alert_config {
  double threshold_m;
  double clear_margin_m;
  int min_consecutive;
} rh_alert_config;

#define RH_MESSAGE_CAPACITY 96

typedef struct rh_warning_event {
  int64_t frame_id;
  int category;
  double distance_m;
  char message[RH_MESSAGE_CAPACITY];
} rh_warning_event;

typedef struct rh_run_summary {
  size_t frames;
  size_t detections;
  size_t warnings;
  double mean_ms;
  double median_ms;
  double p99_ms;
  double fps;
  double wall_s;
} rh_run_summary;

RH_API void rh_imu_params_default(rh_imu_params* out);
RH_API void rh_fusion_config_default(rh_fusion_config* out);
RH_API void rh_alert_config_default(rh_alert_config* out);

/* ---- IMU ---------------------------------------------------------------- */

typedef struct rh_vibration_filter rh_vibration_filter;

RH_API rh_status rh_vibration_filter_create(const rh_imu_params* params, rh_vibration_filter** out);
RH_API rh_status rh_vibration_filter_push(rh_vibration_filter* filter, const rh_accel_sample* sample,
                                          rh_vibration_point* out);
RH_API void rh_vibration_filter_destroy(rh_vibration_filter* filter);

RH_API rh_status rh_vibration_metrics(const rh_vibration_point* window, size_t n, double* peak, double* rms);

/* ---- camera geometry ---------------------------------------------------- */

RH_API rh_status rh_deproject(double u, double v, double depth_m, const rh_intrinsics* intr, double out_xyz[3]);
RH_API rh_status rh_project(const double xyz[3], const rh_intrinsics* intr, double out_uv[2]);

typedef struct rh_depth_frame rh_depth_frame;

/* values may be NULL for an all-zero frame; otherwise width*height entries. */
RH_API rh_status rh_depth_frame_create(int width, int height, double depth_scale, const uint16_t* values,
                                       rh_depth_frame** out);
RH_API rh_status rh_depth_frame_load(const char* path, double depth_scale, rh_depth_frame** out);
RH_API rh_status rh_depth_frame_save(const rh_depth_frame* frame, const char* path);
RH_API int rh_depth_frame_width(const rh_depth_frame* frame);
RH_API int rh_depth_frame_height(const rh_depth_frame* frame);
RH_API double rh_depth_frame_scale(const rh_depth_frame* frame);
RH_API const uint16_t* rh_depth_frame_data(const rh_depth_frame* frame);
RH_API rh_status rh_depth_frame_align(const rh_depth_frame* depth, const rh_intrinsics* depth_intr,
                                      const rh_intrinsics* color_intr, const rh_extrinsics* depth_to_color,
                                      rh_depth_frame** out);
RH_API void rh_depth_frame_destroy(rh_depth_frame* frame);

/* ---- detections --------------------------------------------------------- */

/* out needs room for n entries; *out_n receives the surviving count. */
RH_API rh_status rh_postprocess(const rh_detection* raw, size_t n, double conf_thresh, double nms_iou, int model_w,
                                int model_h, int frame_w, int frame_h, rh_detection* out, size_t* out_n);

typedef struct rh_detection_source rh_detection_source;

/* spec is a replay file path or "exec:<command>". last_frame < 0 means the
 * recording ends at its final record. */
RH_API rh_status rh_detection_source_open(const char* spec, int64_t last_frame, rh_detection_source** out);
/* *dets stays valid until the next call on this source. */
RH_API rh_status rh_detection_source_next(rh_detection_source* source, int64_t frame_id, const rh_detection** dets,
                                          size_t* n);
RH_API void rh_detection_source_destroy(rh_detection_source* source);

/* ---- fusion and alerts -------------------------------------------------- */

/* out needs room for n entries. */
RH_API rh_status rh_fuse(const rh_detection* dets, size_t n, const rh_depth_frame* depth, const rh_fusion_config* cfg,
                         rh_fused_detection* out);

typedef struct rh_alert_tracker rh_alert_tracker;

RH_API rh_status rh_alert_tracker_create(const rh_alert_config* cfg, rh_alert_tracker** out);
/* *events stays valid until the next update on this tracker. */
RH_API rh_status rh_alert_tracker_update(rh_alert_tracker* tracker, const rh_fused_detection* fused, size_t n,
                                         int64_t frame_id, const rh_warning_event** events, size_t* n_events);
RH_API void rh_alert_tracker_destroy(rh_alert_tracker* tracker);

/* ---- evaluation --------------------------------------------------------- */

typedef enum rh_interp { RH_INTERP_ALLPOINT = 0, RH_INTERP_101PT = 1 } rh_interp;

typedef struct rh_eval_row {
  const char* name;
  int category; /* -1 for the "All" row */
  size_t images;
  size_t instances;
  size_t detections;
  double precision;
  double recall;
  double map50;
  double map50_95;
  int included;
} rh_eval_row;

typedef struct rh_eval_report rh_eval_report;

RH_API rh_status rh_evaluate(const rh_detection* dets, size_t n_dets, const rh_ground_truth* gts, size_t n_gts,
                             rh_interp interp, rh_eval_report** out);
/* pred_path uses the replay grammar; gt_dir holds <image id>.txt files with
 * normalized boxes, denormalized with image_w x image_h. */
RH_API rh_status rh_evaluate_files(const char* pred_path, const char* gt_dir, int image_w, int image_h,
                                   rh_interp interp, rh_eval_report** out);
RH_API size_t rh_eval_report_row_count(const rh_eval_report* report);
RH_API rh_status rh_eval_report_row(const rh_eval_report* report, size_t index, rh_eval_row* out);
RH_API const char* rh_eval_report_table(const rh_eval_report* report);
RH_API const char* rh_eval_report_json(const rh_eval_report* report);
RH_API void rh_eval_report_destroy(rh_eval_report* report);

/* ---- dataset ------------------------------------------------------------ */

RH_API rh_status rh_split_sizes(size_t n, double train, double val, double test, size_t out_sizes[3]);
/* Writes a permutation of 0..n-1 into out_order: train ids first, then val, then test. */
RH_API rh_status rh_split_indices(size_t n, double train, double val, double test, uint64_t seed, size_t* out_order,
                                  size_t out_sizes[3]);
RH_API rh_status rh_verify_category_map(const char* path);

/* ---- pipeline ----------------------------------------------------------- */

typedef struct rh_replay_options {
  const char* manifest;
  const char* detections; /* NULL: use the manifest's */
  const char* out_dir;
  rh_fusion_config fusion;
  rh_alert_config alert;
  uint64_t seed;
  int pipelined;
  size_t queue_capacity;
} rh_replay_options;

RH_API void rh_replay_options_default(rh_replay_options* out);
RH_API rh_status rh_run_replay(const rh_replay_options* opts, rh_run_summary* summary);

typedef struct rh_bench_options {
  size_t frames;
  int dets_per_frame;
  int width, height;
  uint64_t seed;
  rh_fusion_config fusion;
  rh_alert_config alert;
} rh_bench_options;

RH_API void rh_bench_options_default(rh_bench_options* out);
RH_API rh_status rh_run_bench(const rh_bench_options* opts, rh_run_summary* summary);

typedef struct rh_imu_analysis rh_imu_analysis;

RH_API rh_status rh_imu_analyze_file(const char* log_path, const rh_imu_params* params, double window_s,
                                     rh_imu_analysis** out);
RH_API size_t rh_imu_analysis_sample_count(const rh_imu_analysis* analysis);
RH_API void rh_imu_analysis_overall(const rh_imu_analysis* analysis, double* peak, double* rms);
RH_API rh_status rh_imu_analysis_write(const rh_imu_analysis* analysis, const char* series_path,
                                       const char* windows_path);
RH_API const char* rh_imu_analysis_table(const rh_imu_analysis* analysis);
/* Text stays valid until the next rh_imu_compare call on this thread. */
RH_API const char* rh_imu_compare(const rh_imu_analysis* a, const char* name_a, const rh_imu_analysis* b,
                                  const char* name_b);
RH_API void rh_imu_analysis_destroy(rh_imu_analysis* analysis);

typedef struct rh_render_options {
  const char* manifest;
  const char* fused;
  const char* out_dir;
  rh_alert_config alert;
} rh_render_options;

RH_API rh_status rh_run_render(const rh_render_options* opts, size_t* written);

#ifdef __cplusplus
}
#endif

#endif /* ROADHAZARD_H */
