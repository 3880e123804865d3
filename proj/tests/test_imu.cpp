#include <cmath>
#include <limits>

#include "doctest.h"
#include "oracles/imu_oracle.hpp"
#include "roadhazard/error.hpp"
#include "roadhazard/imu_filtering.hpp"
#include "support.hpp"

namespace rh = roadhazard;
using doctest::Approx;

TEST_SUITE("imu_filtering") {
  TEST_CASE("lowpass seeds from the first sample") {
    const auto g = rh::lowpass_update({}, {0.0, 0.0, 6.0, 7.8}, 0.95);
    CHECK(g.initialized);
    CHECK(g.gy == 6.0);
    CHECK(g.gz == 7.8);
  }

  TEST_CASE("lowpass fixed point") {
    for (double alpha : {0.0, 0.5, 0.98, 1.0}) {
      const auto g = rh::lowpass_update({9.81, 0.0, true}, {0.0, 0.0, 9.81, 0.0}, alpha);
      CHECK(g.gy == 9.81);
      CHECK(g.gz == 0.0);
    }
  }

  TEST_CASE("lowpass single step") {
    const auto g = rh::lowpass_update({0.0, 0.0, true}, {0.0, 0.0, 1.0, 0.0}, 0.9);
    CHECK(g.gy == Approx(0.1).epsilon(1e-15));
    CHECK(g.gz == 0.0);
  }

  TEST_CASE("lowpass rejects bad input") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(rh::lowpass_update({}, {0.0, 0.0, nan, 1.0}, 0.9), rh::Error);
    try {
      rh::lowpass_update({}, {0.0, 0.0, std::numeric_limits<double>::infinity(), 1.0}, 0.9);
      FAIL("expected throw");
    } catch (const rh::Error& e) {
      CHECK(e.code() == rh::Errc::InvalidSample);
    }
    try {
      rh::lowpass_update({}, {0.0, 0.0, 1.0, 1.0}, 1.5);
      FAIL("expected throw");
    } catch (const rh::Error& e) {
      CHECK(e.code() == rh::Errc::InvalidArgument);
    }
  }

  TEST_CASE("lowpass output is a convex combination") {
    rhtest::Gen gen(101);
    for (int i = 0; i < 1000; ++i) {
      const rh::GravityEstimate g{gen.uniform(-20, 20), gen.uniform(-20, 20), true};
      const rh::AccelSample s{0.0, 0.0, gen.uniform(-20, 20), gen.uniform(-20, 20)};
      const auto out = rh::lowpass_update(g, s, gen.uniform(0, 1));
      CHECK(out.gy >= std::min(g.gy, s.ay) - 1e-12);
      CHECK(out.gy <= std::max(g.gy, s.ay) + 1e-12);
      CHECK(out.gz >= std::min(g.gz, s.az) - 1e-12);
      CHECK(out.gz <= std::max(g.gz, s.az) + 1e-12);
    }
  }

  TEST_CASE("linear vertical acceleration examples") {
    CHECK(rh::linear_vertical_accel({0, 0, 3, 4}, {0, 0, true}) == 5.0);
    CHECK(rh::linear_vertical_accel({0, 0, 6.93, 6.95}, {6.93, 6.95, true}) == 0.0);
    try {
      rh::linear_vertical_accel({0, 0, 3, 4}, {});
      FAIL("expected throw");
    } catch (const rh::Error& e) {
      CHECK(e.code() == rh::Errc::GravityNotReady);
    }
  }

  TEST_CASE("linear vertical acceleration matches the straight-line oracle") {
    rhtest::Gen gen(102);
    for (int i = 0; i < 100; ++i) {
      const rh::AccelSample s{0, gen.uniform(-5, 5), gen.uniform(-15, 15), gen.uniform(-15, 15)};
      const rh::GravityEstimate g{gen.uniform(-10, 10), gen.uniform(-10, 10), true};
      const double got = rh::linear_vertical_accel(s, g);
      CHECK(std::abs(got - oracle::vertical_accel(s.ay, s.az, g.gy, g.gz)) <= 1e-12);
      CHECK(got >= 0.0);
    }
  }

  TEST_CASE("linear vertical acceleration is symmetric under sign flip") {
    rhtest::Gen gen(103);
    for (int i = 0; i < 500; ++i) {
      const double gy = gen.uniform(-10, 10), gz = gen.uniform(-10, 10);
      const double ly = gen.uniform(-5, 5), lz = gen.uniform(-5, 5);
      const double a = rh::linear_vertical_accel({0, 0, gy + ly, gz + lz}, {gy, gz, true});
      const double b = rh::linear_vertical_accel({0, 0, gy - ly, gz - lz}, {gy, gz, true});
      CHECK(a == Approx(b).epsilon(1e-12));
    }
  }

  TEST_CASE("kalman hand trace") {
    const auto [state, x] = rh::kalman_step({0.0, 1.0, 0.01, 1.0}, 1.0);
    CHECK(x == Approx(1.01 / 2.01).epsilon(1e-15));
    CHECK(state.x == x);
    CHECK(state.p == Approx((1.0 - 1.01 / 2.01) * 1.01).epsilon(1e-15));
  }

  TEST_CASE("kalman fixed point") {
    rh::KalmanState s{2.5, 1.0, 0.05, 1.0};
    for (int i = 0; i < 1000; ++i) s = rh::kalman_step(s, 2.5).first;
    CHECK(s.x == 2.5);
  }

  TEST_CASE("kalman gain in (0,1) and variance settles monotonically") {
    rhtest::Gen gen(104);
    for (int trial = 0; trial < 100; ++trial) {
      rh::KalmanState s{0.0, gen.uniform(0.01, 10.0), gen.uniform(0.0, 1.0), gen.uniform(0.01, 5.0)};
      double prev_p = s.p;
      // Steady state P solves P = (P+q) r / (P+q+r).
      const double q = s.q, r = s.r;
      const double p_inf = (-q + std::sqrt(q * q + 4 * q * r)) / 2.0;
      const bool from_above = s.p >= p_inf;
      for (int i = 0; i < 50; ++i) {
        const double prior = s.p + s.q;
        const double k = prior / (prior + s.r);
        CHECK(k > 0.0);
        CHECK(k < 1.0);
        s = rh::kalman_step(s, gen.uniform(-3, 3)).first;
        if (from_above)
          CHECK(s.p <= prev_p + 1e-15);
        else
          CHECK(s.p >= prev_p - 1e-15);
        prev_p = s.p;
      }
    }
  }

  TEST_CASE("kalman rejects non-finite measurement") {
    try {
      rh::kalman_step({}, std::numeric_limits<double>::quiet_NaN());
      FAIL("expected throw");
    } catch (const rh::Error& e) {
      CHECK(e.code() == rh::Errc::InvalidSample);
    }
  }

  TEST_CASE("kalman matches the spelled-out oracle") {
    rhtest::Gen gen(105);
    rh::KalmanState s{};
    oracle::Kalman o{0.0, 1.0, 0.05, 1.0};
    for (int i = 0; i < 2000; ++i) {
      const double z = gen.uniform(-4, 4);
      const auto [next, x] = rh::kalman_step(s, z);
      s = next;
      CHECK(std::abs(x - o.step(z)) <= 1e-12);
    }
  }

  TEST_CASE("kalman reduces noise around the mean (Monte Carlo)") {
    rhtest::Gen gen(106);
    const double m = 1.7;
    rh::KalmanState s{};
    double err_x = 0.0, err_z = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const double z = m + gen.normal();
      s = rh::kalman_step(s, z).first;
      err_x += std::abs(s.x - m);
      err_z += std::abs(z - m);
    }
    CHECK(err_x / n < err_z / n);
  }

  TEST_CASE("vibration metrics examples") {
    using VP = rh::VibrationPoint;
    const std::vector<VP> zeros{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    auto m = rh::vibration_metrics(zeros);
    CHECK(m.peak == 0.0);
    CHECK(m.rms == 0.0);

    const std::vector<VP> constant{{0, 0, 2.5}, {1, 0, 2.5}, {2, 0, 2.5}};
    m = rh::vibration_metrics(constant);
    CHECK(m.peak == 2.5);
    CHECK(m.rms == Approx(2.5).epsilon(1e-15));

    const std::vector<VP> pair{{0, 0, 3}, {1, 0, 4}};
    m = rh::vibration_metrics(pair);
    CHECK(m.peak == 4.0);
    CHECK(m.rms == Approx(std::sqrt(12.5)).epsilon(1e-15));

    try {
      rh::vibration_metrics({});
      FAIL("expected throw");
    } catch (const rh::Error& e) {
      CHECK(e.code() == rh::Errc::EmptyWindow);
    }
  }

  TEST_CASE("filter enforces strictly increasing time") {
    rh::VibrationFilter f;
    f.push({1.0, 0, 1, 9});
    try {
      f.push({1.0, 0, 1, 9});
      FAIL("expected throw");
    } catch (const rh::Error& e) {
      CHECK(e.code() == rh::Errc::Order);
    }
  }

  TEST_CASE("stream processing is bit-identical across runs") {
    rhtest::Gen gen(107);
    std::vector<rh::AccelSample> samples;
    for (int i = 0; i < 500; ++i)
      samples.push_back({i * 0.005, gen.uniform(-1, 1), 4.9 + gen.normal(), 8.5 + gen.normal()});
    const auto a = rh::process_stream(samples);
    const auto b = rh::process_stream(samples);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].raw == b[i].raw);
      CHECK(a[i].smoothed == b[i].smoothed);
      CHECK(a[i].raw >= 0.0);
    }
  }

  TEST_CASE("x axis does not affect the metric") {
    std::vector<rh::AccelSample> a, b;
    rhtest::Gen gen(108);
    for (int i = 0; i < 200; ++i) {
      const double ay = 4.9 + gen.normal(), az = 8.5 + gen.normal();
      a.push_back({i * 0.01, 0.0, ay, az});
      b.push_back({i * 0.01, gen.uniform(-50, 50), ay, az});
    }
    const auto pa = rh::process_stream(a);
    const auto pb = rh::process_stream(b);
    for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i].smoothed == pb[i].smoothed);
  }
}
