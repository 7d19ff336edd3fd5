#include "ecsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ecsim::aeb {

void validate(const BrakeParams& p) {
  if (!(p.a_const > 0.0) || !std::isfinite(p.a_const)) {
    throw std::invalid_argument("a_const must be > 0");
  }
  if (!(p.t_response >= 0.0) || !std::isfinite(p.t_response)) {
    throw std::invalid_argument("t_response must be >= 0");
  }
}

void validate(const SensorParams& s) {
  if (!(s.r_g > 0.0) || !(s.r_g < s.r_max) || !std::isfinite(s.r_max)) {
    throw std::invalid_argument("sensor ranges must satisfy 0 < r_g < r_max");
  }
  if (!(s.f_sensor > 0.0) || !std::isfinite(s.f_sensor)) {
    throw std::invalid_argument("f_sensor must be > 0");
  }
}

double remaining_speed(double v_initial, const BrakeParams& p) {
  validate(p);
  if (!(v_initial >= 0.0)) throw std::domain_error("speed must be >= 0");
  const double v_rem = v_initial - 0.5 * p.a_const * p.t_response;
  if (v_rem < 0.0) {
    throw std::domain_error("speed " + std::to_string(v_initial) +
                            " m/s is shed entirely during the brake ramp");
  }
  return v_rem;
}

double stopping_distance(double v_initial, const BrakeParams& p) {
  remaining_speed(v_initial, p);
  const double a = p.a_const;
  const double tr = p.t_response;
  return v_initial * v_initial / (2.0 * a) + v_initial * tr / 2.0 -
         a * tr * tr / 24.0;
}

double stopping_time(double v_initial, const BrakeParams& p) {
  return p.t_response + remaining_speed(v_initial, p) / p.a_const;
}

double ttr(const EgoState& state, const BrakeParams& p) {
  if (!(state.v_ego > 0.0)) {
    throw std::domain_error("TTR is undefined for a stopped vehicle");
  }
  return (state.d_o - stopping_distance(state.v_ego, p)) / state.v_ego;
}

bool should_brake(const EgoState& state, const BrakeParams& p) {
  return ttr(state, p) < 0.0;
}

bool should_warn(const EgoState& state, const BrakeParams& p, double lead) {
  return ttr(state, p) < lead;
}

double detection_probability(double d_o, const SensorParams& s) {
  if (d_o <= s.r_g) return 1.0;
  if (d_o <= s.r_max) return std::exp(-(d_o - s.r_g) / (s.r_max - s.r_g));
  return 0.0;
}

KinematicState deceleration_profile(double t, const BrakeParams& p,
                                    double v0) {
  if (!(t >= 0.0)) throw std::invalid_argument("time since brake must be >= 0");
  const double v_rem = remaining_speed(v0, p);
  const double a = p.a_const;
  const double tr = p.t_response;

  if (t < tr) {
    return {a * t / tr, v0 - a * t * t / (2.0 * tr),
            v0 * t - a * t * t * t / (6.0 * tr)};
  }
  const double t_const = v_rem / a;
  if (t >= tr + t_const) return {0.0, 0.0, stopping_distance(v0, p)};
  const double tau = t - tr;
  const double s_ramp = v0 * tr - a * tr * tr / 6.0;
  return {a, v_rem - a * tau, s_ramp + v_rem * tau - a * tau * tau / 2.0};
}

double time_to_cover(double distance, const BrakeParams& p, double v0) {
  if (distance <= 0.0) return 0.0;
  if (distance > stopping_distance(v0, p)) return -1.0;
  const double a = p.a_const;
  const double tr = p.t_response;
  const double s_ramp = v0 * tr - a * tr * tr / 6.0;
  if (tr > 0.0 && distance <= s_ramp) {
    // Distance is strictly increasing on the ramp; bisection to full precision.
    double lo = 0.0;
    double hi = tr;
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (deceleration_profile(mid, p, v0).distance_traveled < distance) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return hi;
  }
  // v_rem*tau - a*tau^2/2 = rest, smaller root.
  const double v_rem = remaining_speed(v0, p);
  const double rest = distance - s_ramp;
  const double disc = std::max(0.0, v_rem * v_rem - 2.0 * a * rest);
  const double tau = 2.0 * rest / (v_rem + std::sqrt(disc));
  return tr + tau;
}

}  // namespace ecsim::aeb
