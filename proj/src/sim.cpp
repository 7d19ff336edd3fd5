#include "ecsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "ecsim/rng.hpp"

namespace ecsim {

void LatencySpec::validate(std::string_view name) const {
  if (!std::isfinite(min_) || !std::isfinite(max_) || !(min_ >= 0.0) ||
      !(min_ <= max_)) {
    throw std::invalid_argument("latency of " + std::string(name) +
                                " must satisfy 0 <= min <= max");
  }
}

}  // namespace ecsim

namespace ecsim::sim {

namespace {

constexpr std::array<std::string_view, 6> kFunctionNames = {
    "f_DA", "f_OD", "f_TP", "f_CA", "f_WA", "f_BC"};

constexpr std::array<std::string_view, 8> kEventNames = {
    "enter_range", "sensor_sample", "detected", "warning",
    "brake_demand", "full_decel",   "stopped",  "collision"};

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) + " must be > 0");
  }
}

// First instant phase + k*period (k >= 0) that is >= t.
double next_tick(double phase, double period, double t) {
  if (t <= phase) return phase;
  double k = std::ceil((t - phase) / period);
  while (k > 0.0 && phase + (k - 1.0) * period >= t) k -= 1.0;
  while (phase + k * period < t) k += 1.0;
  return phase + k * period;
}

}  // namespace

std::string_view function_name(Function f) {
  return kFunctionNames[static_cast<std::size_t>(f)];
}

std::optional<Function> parse_function(std::string_view name) {
  for (auto f : kAllFunctions) {
    if (function_name(f) == name) return f;
  }
  return std::nullopt;
}

std::string_view event_name(EventKind kind) {
  return kEventNames[static_cast<std::size_t>(kind)];
}

std::optional<EventKind> parse_event_name(std::string_view name) {
  for (auto kind : kAllEventKinds) {
    if (event_name(kind) == name) return kind;
  }
  return std::nullopt;
}

LatencyTable LatencyTable::defaults() {
  LatencyTable table;
  table[Function::kDataAcquisition] = LatencySpec::constant(0.1);
  table[Function::kObjectDetection] = LatencySpec::uniform(0.005, 0.010);
  table[Function::kTrajectoryPrediction] = LatencySpec::uniform(0.015, 0.030);
  table[Function::kCollisionAssessment] = LatencySpec::uniform(0.005, 0.010);
  table[Function::kWarningAssessment] = LatencySpec::constant(0.0);
  table[Function::kBrakeControl] = LatencySpec::constant(0.0);
  return table;
}

void SimScenario::validate() const {
  require_positive(v_initial, "v_initial");
  aeb::validate(brake);
  aeb::validate(sensor);
  aeb::remaining_speed(v_initial, brake);
  if (!(d_initial > sensor.r_max) || !std::isfinite(d_initial)) {
    throw std::invalid_argument("d_initial must exceed r_max");
  }
  require_positive(f_trj, "f_trj");
  require_positive(f_brake, "f_brake");
  for (auto f : kAllFunctions) latencies[f].validate(function_name(f));
  if (!(warning_lead >= 0.0) || !std::isfinite(warning_lead)) {
    throw std::invalid_argument("warning_lead must be >= 0");
  }
  if (prediction_horizon &&
      (!(*prediction_horizon >= 0.0) || !std::isfinite(*prediction_horizon))) {
    throw std::invalid_argument("prediction_horizon must be >= 0");
  }
  if (constant_detection_probability &&
      !(*constant_detection_probability >= 0.0 &&
        *constant_detection_probability <= 1.0)) {
    throw std::invalid_argument("constant_detection_probability must be in [0, 1]");
  }
  if (runs < 1) throw std::invalid_argument("runs must be >= 1");
  const auto& r = requirements;
  for (double b : {r.budget_acq, r.budget_det, r.budget_trj, r.budget_col,
                   r.budget_wrn, r.ecreq12_margin}) {
    if (!(b >= 0.0) || !std::isfinite(b)) {
      throw std::invalid_argument("requirement budgets must be >= 0");
    }
  }
  if (!(r.decel_tolerance >= 0.0 && r.decel_tolerance < 1.0)) {
    throw std::invalid_argument("decel_tolerance must be in [0, 1)");
  }
  for (const auto& [id, fraction] : r.admissible) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
      throw std::invalid_argument("admissible fraction of " + id +
                                  " must be in [0, 1]");
    }
  }
}

double SimScenario::effective_prediction_horizon() const {
  if (prediction_horizon) return *prediction_horizon;
  return 1.0 / f_trj + latencies[Function::kTrajectoryPrediction].max() +
         latencies[Function::kCollisionAssessment].max() + 1.0 / f_brake +
         latencies[Function::kBrakeControl].max();
}

std::vector<double> RunRecord::occurrences(EventKind kind) const {
  auto one = [](const std::optional<double>& t) {
    return t ? std::vector<double>{*t} : std::vector<double>{};
  };
  switch (kind) {
    case EventKind::kEnterRange:
      return one(t0);
    case EventKind::kSensorSample:
      return sample_times;
    case EventKind::kDetected:
      return one(t_detect);
    case EventKind::kWarning:
      return one(t1);
    case EventKind::kBrakeDemand:
      return one(t2);
    case EventKind::kFullDecel:
      return one(t3);
    case EventKind::kStopped:
      return one(t4);
    case EventKind::kCollision:
      return one(t_collision);
  }
  return {};
}

RunRecord simulate_run(const SimScenario& s, std::uint64_t run_index) {
  s.validate();
  RunRandom rng(s.seed, run_index);

  // Draw order is part of the reproducibility contract.
  const double sensor_period = 1.0 / s.sensor.f_sensor;
  const double trj_period = 1.0 / s.f_trj;
  const double brake_period = 1.0 / s.f_brake;
  const double sensor_phase = rng.uniform01() * sensor_period;
  const double trj_phase = rng.uniform01() * trj_period;
  const double brake_phase = rng.uniform01() * brake_period;
  RealizedLatencies lat;
  for (auto f : kAllFunctions) {
    lat.values[static_cast<std::size_t>(f)] = s.latencies[f].sample(rng.uniform01());
  }

  RunRecord rec;
  rec.run_index = run_index;
  rec.latencies = lat;

  const double v = s.v_initial;
  auto distance_at = [&](double t) { return s.d_initial - v * t; };
  // Without braking the vehicle reaches the obstacle here.
  const double t_impact = s.d_initial / v;

  rec.t0 = (s.d_initial - s.sensor.r_max) / v;

  // Sensor sampling until the first successful detection.
  for (std::uint64_t k = 0;; ++k) {
    const double ts = sensor_phase + static_cast<double>(k) * sensor_period;
    if (ts >= t_impact) break;
    const double d = distance_at(ts);
    rec.sample_times.push_back(ts);
    double p = 0.0;
    if (s.constant_detection_probability) {
      p = d <= s.sensor.r_max ? *s.constant_detection_probability : 0.0;
    } else {
      p = aeb::detection_probability(d, s.sensor);
    }
    if (p > 0.0 && rng.uniform01() < p) {
      rec.t_sample_detect = ts;
      rec.d_at_detection = d;
      break;
    }
  }

  std::optional<double> warn_tick;
  std::optional<double> brake_tick;
  if (rec.t_sample_detect) {
    const double t_detect = *rec.t_sample_detect + lat[Function::kDataAcquisition];
    if (t_detect < t_impact) {
      rec.t_detect = t_detect;
      rec.t_acq = t_detect - *rec.t0;
      rec.t_det = lat[Function::kObjectDetection];
    }
  }
  if (rec.t_detect) {
    // Trajectory prediction runs on the object list once f_OD has delivered it.
    const double horizon = s.effective_prediction_horizon();
    const double object_ready = *rec.t_detect + lat[Function::kObjectDetection];
    const double first = next_tick(trj_phase, trj_period, object_ready);
    const double k0 = std::round((first - trj_phase) / trj_period);
    for (double k = k0;; k += 1.0) {
      const double tick = trj_phase + k * trj_period;
      if (tick >= t_impact) break;
      const aeb::EgoState predicted{distance_at(tick) - v * horizon, v};
      if (!warn_tick && aeb::should_warn(predicted, s.brake, s.warning_lead)) {
        warn_tick = tick;
      }
      if (aeb::should_brake(predicted, s.brake)) {
        brake_tick = tick;
        break;
      }
    }
  }

  const double tp = lat[Function::kTrajectoryPrediction];
  if (warn_tick) {
    rec.t_trj = tp;
    const double t1 = *warn_tick + tp + lat[Function::kWarningAssessment];
    if (t1 < t_impact) {
      rec.t1 = t1;
      rec.t_wrn = t1 - *rec.t_detect;
    }
  }
  if (brake_tick) {
    rec.t_trj = tp;
    rec.t_col = lat[Function::kCollisionAssessment];
    const double assessed = *brake_tick + tp + lat[Function::kCollisionAssessment];
    const double t2 = next_tick(brake_phase, brake_period, assessed) +
                      lat[Function::kBrakeControl];
    if (t2 < t_impact) {
      rec.t2 = t2;
      rec.pipeline_latency = lat[Function::kDataAcquisition] +
                             lat[Function::kObjectDetection] + tp +
                             lat[Function::kCollisionAssessment];
    }
  }

  if (rec.t2) {
    const double t2 = *rec.t2;
    const double d2 = distance_at(t2);
    rec.v_at_brake = v;
    const double gap = d2 - aeb::stopping_distance(v, s.brake);
    const double t3 = t2 + s.brake.t_response;
    if (gap > 0.0) {
      rec.t3 = t3;
      rec.t4 = t2 + aeb::stopping_time(v, s.brake);
      rec.min_distance = gap;
    } else {
      const double tc = t2 + std::max(0.0, aeb::time_to_cover(d2, s.brake, v));
      if (t3 <= tc) rec.t3 = t3;
      rec.t_collision = tc;
      rec.collided = true;
      rec.min_distance = 0.0;
    }
  } else {
    rec.t_collision = t_impact;
    rec.collided = true;
    rec.min_distance = 0.0;
  }

  auto add = [&](const std::optional<double>& t, EventKind kind) {
    if (t) rec.events.push_back({*t, kind});
  };
  add(rec.t0, EventKind::kEnterRange);
  for (double ts : rec.sample_times) rec.events.push_back({ts, EventKind::kSensorSample});
  add(rec.t_detect, EventKind::kDetected);
  add(rec.t1, EventKind::kWarning);
  add(rec.t2, EventKind::kBrakeDemand);
  add(rec.t3, EventKind::kFullDecel);
  add(rec.t4, EventKind::kStopped);
  add(rec.t_collision, EventKind::kCollision);
  std::stable_sort(rec.events.begin(), rec.events.end(),
                   [](const SimEvent& a, const SimEvent& b) {
                     if (a.time != b.time) return a.time < b.time;
                     return static_cast<int>(a.kind) < static_cast<int>(b.kind);
                   });
  return rec;
}

std::vector<RunRecord> run_monte_carlo(const SimScenario& scenario,
                                       unsigned threads) {
  scenario.validate();
  const std::uint64_t runs = scenario.runs;
  std::vector<RunRecord> records(runs);
  const std::uint64_t workers = std::clamp<std::uint64_t>(threads, 1, runs);
  if (workers == 1) {
    for (std::uint64_t i = 0; i < runs; ++i) records[i] = simulate_run(scenario, i);
    return records;
  }

  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::uint64_t i = w; i < runs; i += workers) {
            records[i] = simulate_run(scenario, i);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return records;
}

}  // namespace ecsim::sim
