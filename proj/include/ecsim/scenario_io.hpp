#ifndef ECSIM_SCENARIO_IO_HPP
#define ECSIM_SCENARIO_IO_HPP

#include <filesystem>

#include "ecsim/json_io.hpp"
#include "ecsim/sim.hpp"

namespace ecsim::sim {

// Every key is optional; omitted keys keep the SimScenario defaults. Unknown
// keys are rejected.
//
//   { "v_initial": 30, "d_initial": 200,
//     "brake":  {"a_const": 4, "t_response": 0.6},
//     "sensor": {"r_g": 136.44, "r_max": 160.44, "f_sensor": 10},
//     "f_trj": 25, "f_brake": 100, "warning_lead": 0.8,
//     "prediction_horizon": 0.09, "constant_detection_probability": 0.5,
//     "latencies": {"f_OD": {"distribution": "uniform", "min": 0.005, "max": 0.01},
//                   "f_WA": {"distribution": "constant", "value": 0}},
//     "seed": 20251015, "runs": 10000,
//     "requirements": {
//       "budgets": {"ACQ": 0.45, "DET": 0.01, "TRJ": 0.03, "COL": 0.01, "WRN": 0.8},
//       "decel_tolerance": 0.15,
//       "ecreq12": {"mode": "stopping_time_bound" | "literal", "margin_s": 0.05},
//       "det_error_rate_limit": 0.01,
//       "admissible": {"ECREQ-2": 0.25} } }
SimScenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const SimScenario& scenario);
SimScenario load_scenario(const std::filesystem::path& path);

LatencySpec latency_from_json(const nlohmann::json& doc, std::string_view where);
nlohmann::json latency_to_json(const LatencySpec& spec);

}  // namespace ecsim::sim

#endif  // ECSIM_SCENARIO_IO_HPP
