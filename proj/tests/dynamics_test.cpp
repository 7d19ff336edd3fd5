#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "ecsim/dynamics.hpp"
#include "support/oracles.hpp"

using namespace ecsim::aeb;

namespace {

const BrakeParams kPaper{4.0, 0.6};
const SensorParams kSensor{136.44, 160.44, 10.0};

// Valid (v, a, t_r) with v >= a*t_r/2.
struct Draw {
  double v, a, tr;
};

Draw random_draw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a_dist(2.0, 10.0);
  std::uniform_real_distribution<double> tr_dist(0.0, 1.5);
  const double a = a_dist(rng);
  const double tr = tr_dist(rng);
  std::uniform_real_distribution<double> v_dist(0.5 * a * tr, 40.0);
  return {v_dist(rng), a, tr};
}

}  // namespace

TEST(StoppingDistance, PaperParameters) {
  EXPECT_NEAR(stopping_distance(30.0, kPaper), 121.44, 1e-9);
  EXPECT_NEAR(stopping_time(30.0, kPaper), 7.8, 1e-9);
  EXPECT_NEAR(remaining_speed(30.0, kPaper), 28.8, 1e-12);
}

TEST(StoppingDistance, AgreesWithGuaranteedRangeMinusReserve) {
  EXPECT_NEAR(kSensor.r_g - stopping_distance(30.0, kPaper), 15.0, 1e-9);
}

TEST(StoppingDistance, StopsExactlyAtRampEnd) {
  const double v = 0.5 * 4.0 * 0.6;
  const auto integrated = oracle::integrate_braking(v, 4.0, 0.6, 1.0);
  EXPECT_NEAR(integrated.distance, 0.48, 1e-6);
  EXPECT_NEAR(stopping_distance(v, kPaper), 0.48, 1e-12);
  EXPECT_NEAR(stopping_time(v, kPaper), 0.6, 1e-12);
}

TEST(StoppingDistance, DegenerateRamp) {
  const BrakeParams instant{4.0, 0.0};
  EXPECT_DOUBLE_EQ(stopping_distance(30.0, instant), 112.5);
  EXPECT_DOUBLE_EQ(stopping_time(30.0, instant), 7.5);
}

TEST(StoppingDistance, RejectsRampOvershoot) {
  EXPECT_THROW(stopping_distance(1.0, kPaper), std::domain_error);
  EXPECT_THROW(stopping_time(1.0, kPaper), std::domain_error);
  EXPECT_THROW(stopping_distance(30.0, BrakeParams{0.0, 0.6}), std::invalid_argument);
  EXPECT_THROW(stopping_distance(30.0, BrakeParams{4.0, -0.1}), std::invalid_argument);
}

TEST(StoppingDistance, MatchesNumericIntegration) {
  const auto integrated = oracle::integrate_braking(30.0, 4.0, 0.6, 9.0);
  EXPECT_NEAR(integrated.distance, stopping_distance(30.0, kPaper), 1e-6);
  EXPECT_EQ(integrated.v, 0.0);
}

TEST(Ttr, Examples) {
  EXPECT_NEAR(ttr({145.44, 30.0}, kPaper), 0.8, 1e-12);
  EXPECT_NEAR(ttr({121.44, 30.0}, kPaper), 0.0, 1e-12);
  EXPECT_NEAR(ttr({106.44, 30.0}, kPaper), -0.5, 1e-12);
  EXPECT_THROW(ttr({100.0, 0.0}, kPaper), std::domain_error);
}

TEST(Predicates, StrictInequalities) {
  EXPECT_FALSE(should_brake({121.44, 30.0}, kPaper));
  EXPECT_TRUE(should_brake({121.44 - 0.3, 30.0}, kPaper));
  EXPECT_FALSE(should_brake({200.0, 30.0}, kPaper));
  EXPECT_TRUE(should_warn({145.43, 30.0}, kPaper));
  EXPECT_FALSE(should_warn({145.44, 30.0}, kPaper));
}

TEST(Predicates, ZeroLeadWarningIsBraking) {
  for (double d = 100.0; d <= 140.0; d += 0.01) {
    ASSERT_EQ(should_warn({d, 30.0}, kPaper, 0.0), should_brake({d, 30.0}, kPaper)) << d;
  }
  EXPECT_EQ(should_warn({121.44, 30.0}, kPaper, 0.0), should_brake({121.44, 30.0}, kPaper));
}

TEST(DetectionProbability, TruncatedExponential) {
  EXPECT_EQ(detection_probability(136.44, kSensor), 1.0);
  EXPECT_EQ(detection_probability(0.0, kSensor), 1.0);
  EXPECT_NEAR(detection_probability(160.44, kSensor), std::exp(-1.0), 1e-12);
  EXPECT_EQ(detection_probability(160.45, kSensor), 0.0);
  EXPECT_EQ(detection_probability(161.0, kSensor), 0.0);
}

TEST(DetectionProbability, MonotoneAndContinuousInsideRange) {
  double previous = detection_probability(0.0, kSensor);
  for (int i = 1; i <= 160440; ++i) {
    const double d = i * 1e-3;
    const double p = detection_probability(d, kSensor);
    ASSERT_LE(p, previous) << d;
    ASSERT_LT(previous - p, 1e-4) << d;
    previous = p;
  }
}

TEST(DecelerationProfile, Examples) {
  const auto at_ramp_end = deceleration_profile(0.6, kPaper, 30.0);
  EXPECT_NEAR(at_ramp_end.v, 28.8, 1e-12);
  EXPECT_NEAR(at_ramp_end.distance_traveled, 17.76, 1e-12);
  EXPECT_NEAR(at_ramp_end.decel, 4.0, 1e-12);

  const auto stopped = deceleration_profile(7.8, kPaper, 30.0);
  EXPECT_EQ(stopped.v, 0.0);
  EXPECT_EQ(stopped.decel, 0.0);
  EXPECT_NEAR(stopped.distance_traveled, 121.44, 1e-9);

  const auto start = deceleration_profile(0.0, kPaper, 30.0);
  EXPECT_EQ(start.decel, 0.0);
  EXPECT_EQ(start.v, 30.0);
  EXPECT_EQ(start.distance_traveled, 0.0);

  const auto later = deceleration_profile(100.0, kPaper, 30.0);
  EXPECT_EQ(later.v, 0.0);
  EXPECT_EQ(later.distance_traveled, stopping_distance(30.0, kPaper));
  EXPECT_THROW(deceleration_profile(-1.0, kPaper, 30.0), std::invalid_argument);
}

TEST(DecelerationProfileProperty, ConsistentWithStoppingFormulas) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto d = random_draw(rng);
    const BrakeParams p{d.a, d.tr};
    const auto end = deceleration_profile(stopping_time(d.v, p), p, d.v);
    ASSERT_EQ(end.v, 0.0);
    const double s = stopping_distance(d.v, p);
    ASSERT_NEAR(end.distance_traveled, s, 1e-9 * s);
  }
}

TEST(DecelerationProfileProperty, MatchesNumericIntegration) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 150; ++i) {
    const auto d = random_draw(rng);
    const BrakeParams p{d.a, d.tr};
    std::uniform_real_distribution<double> t_dist(0.0, 1.1 * stopping_time(d.v, p));
    const double t = t_dist(rng);
    const auto exact = deceleration_profile(t, p, d.v);
    const auto integrated = oracle::integrate_braking(d.v, d.a, d.tr, t);
    ASSERT_NEAR(exact.distance_traveled, integrated.distance, 1e-6)
        << "v=" << d.v << " a=" << d.a << " tr=" << d.tr << " t=" << t;
    ASSERT_NEAR(exact.v, integrated.v, 1e-6);
  }
}

TEST(StoppingDistanceProperty, StrictlyIncreasingInSpeed) {
  double previous = stopping_distance(1.2, kPaper);
  for (double v = 1.25; v <= 60.0; v += 0.05) {
    const double s = stopping_distance(v, kPaper);
    ASSERT_GT(s, previous) << v;
    previous = s;
  }
}

TEST(TtrProperty, IncreasingInDistanceAndZeroAtStoppingDistance) {
  for (double v : {5.0, 13.9, 30.0, 41.7}) {
    const double s = stopping_distance(v, kPaper);
    EXPECT_EQ(ttr({s, v}, kPaper), 0.0);
    double previous = ttr({0.0, v}, kPaper);
    for (double d = 0.5; d < 300.0; d += 0.5) {
      const double t = ttr({d, v}, kPaper);
      ASSERT_GT(t, previous);
      previous = t;
    }
  }
}

TEST(TimeToCover, InvertsProfile) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const auto d = random_draw(rng);
    const BrakeParams p{d.a, d.tr};
    std::uniform_real_distribution<double> t_dist(0.0, stopping_time(d.v, p));
    const double t = t_dist(rng);
    const double s = deceleration_profile(t, p, d.v).distance_traveled;
    const double back = time_to_cover(s, p, d.v);
    ASSERT_NEAR(deceleration_profile(back, p, d.v).distance_traveled, s, 1e-9);
  }
  EXPECT_LT(time_to_cover(200.0, kPaper, 30.0), 0.0);
  EXPECT_EQ(time_to_cover(0.0, kPaper, 30.0), 0.0);
}
