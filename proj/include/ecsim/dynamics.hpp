#ifndef ECSIM_DYNAMICS_HPP
#define ECSIM_DYNAMICS_HPP

namespace ecsim::aeb {

// Two-phase brake actuation: deceleration ramps linearly from 0 to a_const over
// t_response seconds, then stays at a_const until standstill.
struct BrakeParams {
  double a_const = 4.0;     // m/s^2, > 0
  double t_response = 0.6;  // s, >= 0
};

// Truncated sensor: certain detection up to r_g, exponential decay up to r_max,
// nothing beyond.
struct SensorParams {
  double r_g = 136.44;    // m
  double r_max = 160.44;  // m
  double f_sensor = 10.0; // Hz
};

struct EgoState {
  double d_o = 0.0;    // distance to the obstacle, m
  double v_ego = 0.0;  // m/s
};

struct KinematicState {
  double decel = 0.0;              // m/s^2 (magnitude)
  double v = 0.0;                  // m/s
  double distance_traveled = 0.0;  // m since brake onset
};

// Throws std::invalid_argument when a parameter set violates its invariants.
void validate(const BrakeParams& p);
void validate(const SensorParams& s);

// Speed left when the ramp ends: v - a*t_r/2. Throws std::domain_error when it
// would be negative (the ramp alone stops the vehicle).
double remaining_speed(double v_initial, const BrakeParams& p);

// Closed form of ramp distance (v*t_r - a*t_r^2/6) plus the constant phase
// distance v_rem^2/(2a), arranged as v^2/(2a) + v*t_r/2 - a*t_r^2/24, which is
// algebraically identical and keeps decimal inputs exact where possible.
double stopping_distance(double v_initial, const BrakeParams& p);

// t_response + v_rem / a.
double stopping_time(double v_initial, const BrakeParams& p);

// Time-to-react under constant speed: (d_o - s_stop(v)) / v. Requires v > 0.
double ttr(const EgoState& state, const BrakeParams& p);

// Strict comparisons: brake when TTR < 0, warn when TTR < lead.
bool should_brake(const EgoState& state, const BrakeParams& p);
bool should_warn(const EgoState& state, const BrakeParams& p, double lead = 0.8);

double detection_probability(double d_o, const SensorParams& s);

// Exact piecewise kinematics t seconds after brake onset, clamped at standstill.
KinematicState deceleration_profile(double t_since_brake, const BrakeParams& p,
                                    double v_at_brake);

// Time after brake onset at which `distance` metres have been covered, or a
// negative value if the vehicle stops short of it.
double time_to_cover(double distance, const BrakeParams& p, double v_at_brake);

}  // namespace ecsim::aeb

#endif  // ECSIM_DYNAMICS_HPP
