#ifndef ECSIM_COMPLIANCE_HPP
#define ECSIM_COMPLIANCE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecsim/sim.hpp"

namespace ecsim::sim {

struct RequirementOutcome {
  std::string id;
  std::string description;
  std::size_t observable = 0;
  std::size_t violations = 0;
  // violations / observable; 0 when nothing was observable.
  double violation_fraction = 0.0;
  double admissible = 0.0;
  bool passed = true;
};

struct BatchSummary {
  std::size_t runs = 0;
  std::size_t detected = 0;
  std::size_t braked = 0;
  std::size_t collisions = 0;
  // Runs whose detecting sample saw the object at d >= r_g and still collided.
  std::size_t collisions_after_early_detection = 0;
  std::size_t early_detections = 0;
  std::vector<RequirementOutcome> requirements;
  // Budget (ACQ, DET, TRJ, COL, WRN) with the highest violation fraction, if
  // any budget was violated.
  std::optional<std::string> dominant_budget;
  std::optional<double> warning_lead_p1;
  std::optional<double> warning_lead_p50;
  std::optional<double> warning_lead_p99;
  std::optional<double> max_pipeline_latency;

  bool all_passed() const;
  const RequirementOutcome* find(std::string_view id) const;
};

// Requirement ids: ECREQ-1.1, ECREQ-1.2, ECREQ-2, ACQ, DET, TRJ, COL, WRN,
// DET-ERROR-RATE, TREQ-1. Admissible fractions come from
// scenario.requirements.admissible (default 0); DET-ERROR-RATE compares the
// ACQ violation fraction against det_error_rate_limit unless an admissible
// entry for it is given.
BatchSummary summarize_batch(const SimScenario& scenario,
                             std::span<const RunRecord> records);

inline constexpr std::string_view kSweepParameters[] = {
    "f_sensor", "f_trj", "f_brake", "r_g", "r_max", "v_initial", "a_const", "t_response"};

// Throws std::invalid_argument for an unknown parameter name.
void apply_parameter(SimScenario& scenario, std::string_view parameter, double value);

struct SweepPoint {
  double value = 0.0;
  BatchSummary summary;
};

// Every value reuses scenario.seed (common random numbers), so a single-value
// sweep reproduces run_monte_carlo on the modified scenario.
// Throws std::invalid_argument for unknown parameters or values that break a
// scenario invariant.
std::vector<SweepPoint> sweep(const SimScenario& scenario, std::string_view parameter,
                              std::span<const double> values, unsigned threads = 1);

}  // namespace ecsim::sim

#endif  // ECSIM_COMPLIANCE_HPP
