// Command-line front end. Talks to the library only through the C API.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "roadhazard/roadhazard.h"

namespace {

int report(rh_status st) {
  if (st != RH_OK) std::fprintf(stderr, "error: %s: %s\n", rh_status_name(st), rh_last_error());
  return rh_exit_code(st);
}

void print_summary(const rh_run_summary& s) {
  std::printf("frames=%zu detections=%zu warnings=%zu\n", s.frames, s.detections, s.warnings);
  std::printf("latency_ms mean=%.4f median=%.4f p99=%.4f\n", s.mean_ms, s.median_ms, s.p99_ms);
  std::printf("fps=%.1f wall_s=%.3f\n", s.fps, s.wall_s);
}

bool parse_size(const std::string& text, int& w, int& h) {
  return std::sscanf(text.c_str(), "%dx%d", &w, &h) == 2 && w > 0 && h > 0;
}

void add_fusion_options(CLI::App* cmd, rh_fusion_config& fusion, rh_alert_config& alert) {
  cmd->add_option("--samples", fusion.n_samples, "depth samples per detection")->check(CLI::PositiveNumber);
  cmd->add_option("--radius-frac", fusion.radius_frac, "sampling radius as a fraction of the box size");
  cmd->add_option("--trim-keep", fusion.trim_keep, "fraction of sorted samples kept");
  cmd->add_option("--threshold", alert.threshold_m, "warning distance in meters");
  cmd->add_option("--clear-margin", alert.clear_margin_m, "hysteresis margin in meters");
  cmd->add_option("--min-consecutive", alert.min_consecutive, "frames at or under threshold before warning");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground obstacle detection and proximity warning tools"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rh_version()));

  int exit_code = 0;

  // replay
  rh_replay_options replay;
  rh_replay_options_default(&replay);
  std::string manifest, detections, out_dir;
  auto* cmd_replay = app.add_subcommand("replay", "fuse recorded frames with replayed detections");
  cmd_replay->add_option("--manifest", manifest, "recording manifest (JSON)")->required();
  cmd_replay->add_option("--detections", detections, "replay file, `exec:<command>` or `-`; defaults to the manifest's");
  cmd_replay->add_option("--seed", replay.seed, "sampling seed");
  cmd_replay->add_option("--out", out_dir, "output directory")->required();
  bool pipelined = false;
  cmd_replay->add_flag("--pipelined", pipelined, "run load, fuse and assess on separate threads");
  cmd_replay->add_option("--queue", replay.queue_capacity, "queue capacity between stages")->check(CLI::PositiveNumber);
  add_fusion_options(cmd_replay, replay.fusion, replay.alert);
  cmd_replay->callback([&] {
    replay.manifest = manifest.c_str();
    replay.detections = detections.empty() ? nullptr : detections.c_str();
    replay.out_dir = out_dir.c_str();
    replay.pipelined = pipelined ? 1 : 0;
    rh_run_summary s{};
    const rh_status st = rh_run_replay(&replay, &s);
    if (st == RH_OK) print_summary(s);
    exit_code = report(st);
  });

  // eval
  std::string pred, gt, interp = "allpoint", image_size = "640x480", json_out;
  auto* cmd_eval = app.add_subcommand("eval", "score detections against ground truth");
  cmd_eval->add_option("--pred", pred, "detection records")->required();
  cmd_eval->add_option("--gt", gt, "annotation directory")->required();
  cmd_eval->add_option("--interp", interp, "precision interpolation")
      ->check(CLI::IsMember({"allpoint", "101pt"}));
  cmd_eval->add_option("--image-size", image_size, "default image size WxH for normalized annotations");
  cmd_eval->add_option("--json", json_out, "also write the report as JSON");
  cmd_eval->callback([&] {
    int w = 0, h = 0;
    if (!parse_size(image_size, w, h)) {
      std::fprintf(stderr, "error: --image-size expects WxH\n");
      exit_code = 1;
      return;
    }
    rh_eval_report* rep = nullptr;
    const rh_status st = rh_evaluate_files(pred.c_str(), gt.c_str(), w, h,
                                           interp == "101pt" ? RH_INTERP_101PT : RH_INTERP_ALLPOINT, &rep);
    if (st != RH_OK) {
      exit_code = report(st);
      return;
    }
    std::fputs(rh_eval_report_table(rep), stdout);
    if (!json_out.empty()) {
      std::ofstream out(json_out);
      out << rh_eval_report_json(rep) << '\n';
      if (!out) {
        std::fprintf(stderr, "error: IoError: cannot write %s\n", json_out.c_str());
        exit_code = 2;
      }
    }
    rh_eval_report_destroy(rep);
  });

  // imu
  std::string log, compare, imu_out;
  double window_s = 1.0;
  rh_imu_params imu;
  rh_imu_params_default(&imu);
  auto* cmd_imu = app.add_subcommand("imu", "vertical vibration analysis of an accelerometer log");
  cmd_imu->add_option("--log", log, "IMU log (t,ax,ay,az)")->required();
  cmd_imu->add_option("--compare", compare, "second log for a side-by-side comparison");
  cmd_imu->add_option("--out", imu_out, "directory for series and window tables");
  cmd_imu->add_option("--window", window_s, "window length in seconds")->check(CLI::PositiveNumber);
  cmd_imu->add_option("--alpha", imu.alpha, "gravity low-pass coefficient");
  cmd_imu->add_option("--q", imu.q, "Kalman process noise");
  cmd_imu->add_option("--r", imu.r, "Kalman measurement noise");
  cmd_imu->callback([&] {
    rh_imu_analysis* a = nullptr;
    rh_imu_analysis* b = nullptr;
    rh_status st = rh_imu_analyze_file(log.c_str(), &imu, window_s, &a);
    if (st == RH_OK && !compare.empty()) st = rh_imu_analyze_file(compare.c_str(), &imu, window_s, &b);
    if (st == RH_OK && !imu_out.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(imu_out, ec);
      const std::string dir = imu_out + "/";
      st = rh_imu_analysis_write(a, (dir + "vibration.csv").c_str(), (dir + "windows.csv").c_str());
      if (st == RH_OK && b)
        st = rh_imu_analysis_write(b, (dir + "vibration_compare.csv").c_str(), (dir + "windows_compare.csv").c_str());
    }
    if (st == RH_OK) {
      if (b) {
        std::fputs(rh_imu_compare(a, log.c_str(), b, compare.c_str()), stdout);
      } else {
        double peak = 0, rms = 0;
        rh_imu_analysis_overall(a, &peak, &rms);
        std::fputs(rh_imu_analysis_table(a), stdout);
        std::printf("samples=%zu peak=%.4f rms=%.4f\n", rh_imu_analysis_sample_count(a), peak, rms);
      }
    }
    rh_imu_analysis_destroy(a);
    rh_imu_analysis_destroy(b);
    exit_code = report(st);
  });

  // bench
  rh_bench_options bench;
  rh_bench_options_default(&bench);
  std::string bench_size = "640x480";
  auto* cmd_bench = app.add_subcommand("bench", "time align + fuse + assess on synthetic frames");
  cmd_bench->add_option("--frames", bench.frames, "number of frames");
  cmd_bench->add_option("--dets-per-frame", bench.dets_per_frame, "detections per frame")
      ->check(CLI::NonNegativeNumber);
  cmd_bench->add_option("--size", bench_size, "frame size WxH");
  cmd_bench->add_option("--seed", bench.seed, "generator seed");
  cmd_bench->callback([&] {
    if (!parse_size(bench_size, bench.width, bench.height)) {
      std::fprintf(stderr, "error: --size expects WxH\n");
      exit_code = 1;
      return;
    }
    rh_run_summary s{};
    const rh_status st = rh_run_bench(&bench, &s);
    if (st == RH_OK) print_summary(s);
    exit_code = report(st);
  });

  // render
  rh_render_options render{};
  rh_alert_config_default(&render.alert);
  std::string fused;
  auto* cmd_render = app.add_subcommand("render", "draw boxes, distances and warnings onto color frames");
  cmd_render->add_option("--manifest", manifest, "recording manifest (JSON)")->required();
  cmd_render->add_option("--fused", fused, "fused records written by replay")->required();
  cmd_render->add_option("--out", out_dir, "output directory")->required();
  cmd_render->add_option("--threshold", render.alert.threshold_m, "warning distance in meters");
  cmd_render->callback([&] {
    render.manifest = manifest.c_str();
    render.fused = fused.c_str();
    render.out_dir = out_dir.c_str();
    size_t written = 0;
    const rh_status st = rh_run_render(&render, &written);
    if (st == RH_OK) std::printf("rendered %zu frames\n", written);
    exit_code = report(st);
  });

  // split
  size_t split_n = 0;
  uint64_t split_seed = 0;
  std::vector<double> ratios{0.7, 0.2, 0.1};
  auto* cmd_split = app.add_subcommand("split", "deterministic train/val/test split of N items");
  cmd_split->add_option("--count", split_n, "number of items")->required();
  cmd_split->add_option("--ratios", ratios, "train val test ratios")->expected(3);
  cmd_split->add_option("--seed", split_seed, "shuffle seed");
  bool list = false;
  cmd_split->add_flag("--list", list, "print `<index> <subset>` for every item");
  cmd_split->callback([&] {
    std::vector<size_t> order(split_n);
    size_t sizes[3] = {0, 0, 0};
    const rh_status st =
        rh_split_indices(split_n, ratios[0], ratios[1], ratios[2], split_seed, order.data(), sizes);
    if (st == RH_OK) {
      std::printf("train=%zu val=%zu test=%zu\n", sizes[0], sizes[1], sizes[2]);
      if (list) {
        static const char* names[3] = {"train", "val", "test"};
        size_t k = 0;
        for (int part = 0; part < 3; ++part)
          for (size_t i = 0; i < sizes[part]; ++i) std::printf("%zu %s\n", order[k++], names[part]);
      }
    }
    exit_code = report(st);
  });

  // categories
  std::string map_path;
  auto* cmd_cat = app.add_subcommand("categories", "print the category map or check a map file against it");
  cmd_cat->add_option("--check", map_path, "category map file to verify");
  cmd_cat->callback([&] {
    if (!map_path.empty()) {
      const rh_status st = rh_verify_category_map(map_path.c_str());
      if (st == RH_OK) std::printf("%s: ok\n", map_path.c_str());
      exit_code = report(st);
      return;
    }
    for (int id = 0; id < rh_category_count(); ++id) std::printf("%d %s\n", id, rh_category_name(id));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  return exit_code;
}
