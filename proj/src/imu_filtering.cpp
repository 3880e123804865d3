#include "roadhazard/imu_filtering.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "roadhazard/error.hpp"

namespace roadhazard {

namespace {

bool finite(const AccelSample& s) {
  return std::isfinite(s.t) && std::isfinite(s.ax) && std::isfinite(s.ay) && std::isfinite(s.az);
}

}  // namespace

GravityEstimate lowpass_update(const GravityEstimate& state, const AccelSample& sample, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) raise(Errc::InvalidArgument, "low-pass alpha must lie in [0, 1]");
  if (!finite(sample)) raise(Errc::InvalidSample, "non-finite accelerometer sample");
  if (!state.initialized) return {sample.ay, sample.az, true};
  return {alpha * state.gy + (1.0 - alpha) * sample.ay, alpha * state.gz + (1.0 - alpha) * sample.az, true};
}

double linear_vertical_accel(const AccelSample& sample, const GravityEstimate& gravity) {
  if (!gravity.initialized) raise(Errc::GravityNotReady, "gravity estimate has not seen a sample yet");
  return std::hypot(sample.ay - gravity.gy, sample.az - gravity.gz);
}

std::pair<KalmanState, double> kalman_step(const KalmanState& state, double z) {
  if (!std::isfinite(z)) raise(Errc::InvalidSample, "non-finite Kalman measurement");
  if (!(state.p > 0.0) || !(state.q >= 0.0) || !(state.r > 0.0))
    raise(Errc::InvalidArgument, "Kalman state requires p > 0, q >= 0, r > 0");
  KalmanState next = state;
  const double predicted = state.p + state.q;
  const double gain = predicted / (predicted + state.r);
  next.x = state.x + gain * (z - state.x);
  next.p = (1.0 - gain) * predicted;
  return {next, next.x};
}

VibrationMetrics vibration_metrics(std::span<const VibrationPoint> window) {
  if (window.empty()) raise(Errc::EmptyWindow, "vibration metrics need at least one point");
  VibrationMetrics m;
  m.peak = window.front().smoothed;
  double sum_sq = 0.0;
  for (const auto& p : window) {
    m.peak = std::max(m.peak, p.smoothed);
    sum_sq += p.smoothed * p.smoothed;
  }
  m.rms = std::sqrt(sum_sq / static_cast<double>(window.size()));
  return m;
}

VibrationFilter::VibrationFilter(ImuFilterParams params) : params_(params) {
  if (!(params.alpha >= 0.0 && params.alpha <= 1.0)) raise(Errc::Config, "alpha must lie in [0, 1]");
  if (!(params.q >= 0.0) || !(params.r > 0.0)) raise(Errc::Config, "Kalman noise requires q >= 0 and r > 0");
  kalman_.q = params.q;
  kalman_.r = params.r;
}

VibrationPoint VibrationFilter::push(const AccelSample& sample) {
  if (!finite(sample)) raise(Errc::InvalidSample, "non-finite accelerometer sample");
  if (has_last_t_ && !(sample.t > last_t_))
    raise(Errc::Order, "IMU timestamps must strictly increase (t=" + std::to_string(sample.t) + ")");
  has_last_t_ = true;
  last_t_ = sample.t;

  gravity_ = lowpass_update(gravity_, sample, params_.alpha);
  const double raw = linear_vertical_accel(sample, gravity_);
  auto [next, smoothed] = kalman_step(kalman_, raw);
  kalman_ = next;
  return {sample.t, raw, smoothed};
}

std::vector<VibrationPoint> process_stream(std::span<const AccelSample> samples, ImuFilterParams params) {
  VibrationFilter filter(params);
  std::vector<VibrationPoint> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(filter.push(s));
  return out;
}

}  // namespace roadhazard
