#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "roadhazard/error.hpp"
#include "roadhazard/pipeline.hpp"

namespace roadhazard {

ImuAnalysis analyze_imu(std::span<const AccelSample> samples, const ImuFilterParams& params, double window_s) {
  if (!(window_s > 0.0)) raise(Errc::Config, "IMU window length must be positive");
  ImuAnalysis out;
  out.series = process_stream(samples, params);
  if (out.series.empty()) return out;

  const double t0 = out.series.front().t;
  std::size_t begin = 0;
  while (begin < out.series.size()) {
    const auto k = std::floor((out.series[begin].t - t0) / window_s);
    const double lo = t0 + k * window_s;
    const double hi = lo + window_s;
    std::size_t end = begin;
    while (end < out.series.size() && out.series[end].t < hi) ++end;
    if (end == begin) ++end;  // guards against rounding at the boundary
    const std::span<const VibrationPoint> window(out.series.data() + begin, end - begin);
    out.windows.push_back({lo, hi, window.size(), vibration_metrics(window)});
    begin = end;
  }
  out.overall = vibration_metrics(out.series);
  return out;
}

void write_vibration_series(const fs::path& path, std::span<const VibrationPoint> series) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(Errc::Io, "cannot write " + path.string());
  out << "t,raw,smoothed\n";
  for (const auto& p : series) out << fmt::format("{},{:.6f},{:.6f}\n", p.t, p.raw, p.smoothed);
}

void write_window_table(const fs::path& path, std::span<const ImuWindow> windows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(Errc::Io, "cannot write " + path.string());
  out << "t_start,t_end,samples,peak,rms\n";
  for (const auto& w : windows)
    out << fmt::format("{:.3f},{:.3f},{},{:.6f},{:.6f}\n", w.t_start, w.t_end, w.samples, w.metrics.peak, w.metrics.rms);
}

std::string render_window_table(std::span<const ImuWindow> windows) {
  std::string out = fmt::format("{:>10}{:>10}{:>9}{:>10}{:>10}\n", "t_start", "t_end", "samples", "peak", "rms");
  for (const auto& w : windows)
    out += fmt::format("{:>10.3f}{:>10.3f}{:>9}{:>10.4f}{:>10.4f}\n", w.t_start, w.t_end, w.samples, w.metrics.peak,
                       w.metrics.rms);
  return out;
}

std::string render_imu_comparison(const ImuAnalysis& a, const std::string& name_a, const ImuAnalysis& b,
                                  const std::string& name_b) {
  const auto max_window_rms = [](const ImuAnalysis& x) {
    double m = 0.0;
    for (const auto& w : x.windows) m = std::max(m, w.metrics.rms);
    return m;
  };
  std::string out = fmt::format("{:<28}{:>10}{:>12}{:>12}{:>16}\n", "log", "samples", "peak", "rms", "max win rms");
  for (const auto& [name, x] : {std::pair{&name_a, &a}, std::pair{&name_b, &b}}) {
    out += fmt::format("{:<28}{:>10}{:>12.4f}{:>12.4f}{:>16.4f}\n", *name, x->series.size(), x->overall.peak,
                       x->overall.rms, max_window_rms(*x));
  }
  if (b.overall.peak > 0.0 && b.overall.rms > 0.0)
    out += fmt::format("peak ratio {:.3f}, rms ratio {:.3f} (first / second)\n", a.overall.peak / b.overall.peak,
                       a.overall.rms / b.overall.rms);
  return out;
}

}  // namespace roadhazard
