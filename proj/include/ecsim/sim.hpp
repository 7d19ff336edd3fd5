#ifndef ECSIM_SIM_HPP
#define ECSIM_SIM_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecsim/dynamics.hpp"
#include "ecsim/latency.hpp"

namespace ecsim::sim {

// White-box functions of the AEB chain, in pipeline order.
enum class Function {
  kDataAcquisition,      // f_DA
  kObjectDetection,      // f_OD
  kTrajectoryPrediction, // f_TP
  kCollisionAssessment,  // f_CA
  kWarningAssessment,    // f_WA
  kBrakeControl,         // f_BC
};

inline constexpr std::array<Function, 6> kAllFunctions = {
    Function::kDataAcquisition,      Function::kObjectDetection,
    Function::kTrajectoryPrediction, Function::kCollisionAssessment,
    Function::kWarningAssessment,    Function::kBrakeControl};

std::string_view function_name(Function f);
std::optional<Function> parse_function(std::string_view name);

class LatencyTable {
 public:
  // f_DA Constant(0.1); f_OD Uniform(0.005, 0.010); f_TP Uniform(0.015, 0.030);
  // f_CA Uniform(0.005, 0.010); f_WA and f_BC Constant(0).
  static LatencyTable defaults();

  const LatencySpec& operator[](Function f) const {
    return specs_[static_cast<std::size_t>(f)];
  }
  LatencySpec& operator[](Function f) { return specs_[static_cast<std::size_t>(f)]; }

  friend bool operator==(const LatencyTable&, const LatencyTable&) = default;

 private:
  std::array<LatencySpec, 6> specs_{};
};

enum class Ecreq12Mode {
  kStoppingTimeBound,  // t4 - t2 <= stopping_time(v(t2)) + margin
  kLiteral,            // t4 - t2 >= TTR(d(t2), v_initial)
};

// Requirement set checked over each Monte Carlo batch.
struct RequirementConfig {
  double budget_acq = 0.45;
  double budget_det = 0.010;
  double budget_trj = 0.030;
  double budget_col = 0.010;
  double budget_wrn = 0.8;
  // Average deceleration t2..t4 must reach a_const * (1 - tolerance).
  double decel_tolerance = 0.15;
  Ecreq12Mode ecreq12_mode = Ecreq12Mode::kStoppingTimeBound;
  double ecreq12_margin = 0.05;
  // Admissible fraction of runs violating the ACQ budget. An admissible entry
  // for DET-ERROR-RATE takes precedence.
  double det_error_rate_limit = 0.01;
  // Requirement id -> admissible violation fraction; absent ids admit none.
  std::map<std::string, double> admissible;
};

struct SimScenario {
  double v_initial = 30.0;
  aeb::BrakeParams brake;
  aeb::SensorParams sensor;
  double d_initial = 200.0;
  double f_trj = 25.0;
  double f_brake = 100.0;
  LatencyTable latencies = LatencyTable::defaults();
  double warning_lead = 0.8;
  // Look-ahead applied to the obstacle distance before the TTR predicates are
  // evaluated. Unset: one trajectory period plus the worst-case
  // f_TP + f_CA latency, one brake-control period and the worst-case f_BC
  // latency, so that a brake demand never lands past the last safe point.
  std::optional<double> prediction_horizon;
  // Replaces the truncated sensor curve with a constant per-sample detection
  // probability inside r_max.
  std::optional<double> constant_detection_probability;
  std::uint64_t seed = 20251015;
  std::uint64_t runs = 10000;
  RequirementConfig requirements;

  // Throws std::invalid_argument on any broken invariant.
  void validate() const;
  double effective_prediction_horizon() const;
};

enum class EventKind {
  kEnterRange,
  kSensorSample,
  kDetected,
  kWarning,
  kBrakeDemand,
  kFullDecel,
  kStopped,
  kCollision,
};

inline constexpr std::array<EventKind, 8> kAllEventKinds = {
    EventKind::kEnterRange, EventKind::kSensorSample, EventKind::kDetected,
    EventKind::kWarning,    EventKind::kBrakeDemand,  EventKind::kFullDecel,
    EventKind::kStopped,    EventKind::kCollision};

std::string_view event_name(EventKind kind);
std::optional<EventKind> parse_event_name(std::string_view name);

struct SimEvent {
  double time = 0.0;
  EventKind kind = EventKind::kEnterRange;
};

// Realized draws of one run's function latencies.
struct RealizedLatencies {
  std::array<double, 6> values{};
  double operator[](Function f) const { return values[static_cast<std::size_t>(f)]; }
};

struct RunRecord {
  std::uint64_t run_index = 0;
  std::optional<double> t0;        // obstacle enters r_max
  std::optional<double> t_detect;  // sensor reports the object (detected event)
  std::optional<double> t1;        // warning issued
  std::optional<double> t2;        // brake demand applied
  std::optional<double> t3;        // full deceleration reached
  std::optional<double> t4;        // standstill
  std::optional<double> t_collision;

  std::optional<double> t_acq;  // t_detect - t0
  std::optional<double> t_det;  // f_OD latency
  std::optional<double> t_trj;  // f_TP latency
  std::optional<double> t_col;  // f_CA latency
  std::optional<double> t_wrn;  // t1 - t_detect

  std::optional<double> t_sample_detect;  // sample that saw the object
  std::optional<double> d_at_detection;   // obstacle distance at that sample
  std::optional<double> pipeline_latency; // f_DA+f_OD+f_TP+f_CA on the brake path
  double v_at_brake = 0.0;
  double min_distance = 0.0;  // gap at standstill, 0 on impact
  bool collided = false;

  std::vector<double> sample_times;  // sensor samples up to first detection
  std::vector<SimEvent> events;      // time-ordered
  RealizedLatencies latencies;

  // Times at which `kind` occurred, taken from the record fields (not from
  // `events`).
  std::vector<double> occurrences(EventKind kind) const;
};

// One run of the AEB event chain with closed-form kinematics between events.
RunRecord simulate_run(const SimScenario& scenario, std::uint64_t run_index);

// scenario.runs records; run i always uses stream (seed, i), so the result does
// not depend on `threads`.
std::vector<RunRecord> run_monte_carlo(const SimScenario& scenario,
                                       unsigned threads = 1);

}  // namespace ecsim::sim

#endif  // ECSIM_SIM_HPP
