#pragma once

#include <span>
#include <utility>
#include <vector>

namespace roadhazard {

/// One accelerometer reading. Time in seconds, acceleration in m/s^2.
/// The X component is carried through but does not enter the vertical metric.
struct AccelSample {
  double t = 0.0;
  double ax = 0.0;
  double ay = 0.0;
  double az = 0.0;
};

/// Low-pass estimate of the gravity components on the Y and Z axes.
struct GravityEstimate {
  double gy = 0.0;
  double gz = 0.0;
  bool initialized = false;
};

/// Scalar random-walk Kalman filter state.
struct KalmanState {
  double x = 0.0;  // estimate, m/s^2
  double p = 1.0;  // estimate variance
  double q = 0.05; // process-noise variance
  double r = 1.0;  // measurement-noise variance
};

struct VibrationPoint {
  double t = 0.0;
  double raw = 0.0;       // linear vertical acceleration before smoothing
  double smoothed = 0.0;  // after the Kalman filter
};

struct VibrationMetrics {
  double peak = 0.0;
  double rms = 0.0;
};

struct ImuFilterParams {
  double alpha = 0.98;  // gravity smoothing factor
  double q = 0.05;
  double r = 1.0;
};

// First sample seeds the estimate; afterwards g' = alpha*g + (1-alpha)*a.
GravityEstimate lowpass_update(const GravityEstimate& state, const AccelSample& sample, double alpha);

// Norm of the gravity-compensated acceleration in the Y-Z plane.
double linear_vertical_accel(const AccelSample& sample, const GravityEstimate& gravity);

std::pair<KalmanState, double> kalman_step(const KalmanState& state, double z);

VibrationMetrics vibration_metrics(std::span<const VibrationPoint> window);

// Streaming chain: gravity low-pass -> gravity subtraction -> Y-Z norm -> Kalman.
// Single writer; samples must arrive with strictly increasing timestamps.
class VibrationFilter {
 public:
  explicit VibrationFilter(ImuFilterParams params = {});

  VibrationPoint push(const AccelSample& sample);

  const GravityEstimate& gravity() const noexcept { return gravity_; }
  const KalmanState& kalman() const noexcept { return kalman_; }
  const ImuFilterParams& params() const noexcept { return params_; }

 private:
  ImuFilterParams params_;
  GravityEstimate gravity_;
  KalmanState kalman_;
  bool has_last_t_ = false;
  double last_t_ = 0.0;
};

std::vector<VibrationPoint> process_stream(std::span<const AccelSample> samples, ImuFilterParams params = {});

}  // namespace roadhazard
