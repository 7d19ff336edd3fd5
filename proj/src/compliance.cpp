#include "ecsim/compliance.hpp"

#include <algorithm>
#include <stdexcept>

#include "ecsim/model.hpp"

namespace ecsim::sim {

namespace {

struct Counter {
  std::size_t observable = 0;
  std::size_t violations = 0;

  void add(double slack) {
    ++observable;
    if (!is_satisfied(slack)) ++violations;
  }
};

TimingConstraint bound(std::string id, double seconds, Direction direction) {
  return {std::move(id), ConstraintKind::kLatency, "", "", seconds, direction};
}

RequirementOutcome outcome(std::string id, std::string description, const Counter& c,
                           const RequirementConfig& config) {
  RequirementOutcome o;
  o.id = std::move(id);
  o.description = std::move(description);
  o.observable = c.observable;
  o.violations = c.violations;
  o.violation_fraction =
      c.observable == 0 ? 0.0
                        : static_cast<double>(c.violations) / static_cast<double>(c.observable);
  if (auto it = config.admissible.find(o.id); it != config.admissible.end()) {
    o.admissible = it->second;
  }
  o.passed = o.violation_fraction <= o.admissible;
  return o;
}

}  // namespace

bool BatchSummary::all_passed() const {
  return std::all_of(requirements.begin(), requirements.end(),
                     [](const RequirementOutcome& o) { return o.passed; });
}

const RequirementOutcome* BatchSummary::find(std::string_view id) const {
  for (const auto& o : requirements) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

BatchSummary summarize_batch(const SimScenario& scenario,
                             std::span<const RunRecord> records) {
  const auto& cfg = scenario.requirements;
  const auto lead = bound("ECREQ-2", scenario.warning_lead, Direction::kMin);
  const auto acq = bound("ACQ", cfg.budget_acq, Direction::kMax);
  const auto det = bound("DET", cfg.budget_det, Direction::kMax);
  const auto trj = bound("TRJ", cfg.budget_trj, Direction::kMax);
  const auto col = bound("COL", cfg.budget_col, Direction::kMax);
  const auto wrn = bound("WRN", cfg.budget_wrn, Direction::kMax);
  const double min_decel = scenario.brake.a_const * (1.0 - cfg.decel_tolerance);

  Counter c_decel, c_stop, c_lead, c_acq, c_det, c_trj, c_col, c_wrn, c_safe;
  BatchSummary out;
  out.runs = records.size();
  std::vector<double> leads;
  for (const auto& r : records) {
    if (r.t_detect) ++out.detected;
    if (r.t2) ++out.braked;
    if (r.collided) ++out.collisions;
    const bool early = r.d_at_detection && *r.d_at_detection >= scenario.sensor.r_g;
    if (early) {
      ++out.early_detections;
      if (r.collided) ++out.collisions_after_early_detection;
    }

    if (r.t2 && r.t4) {
      const double duration = *r.t4 - *r.t2;
      c_decel.add(r.v_at_brake / duration - min_decel);
      if (cfg.ecreq12_mode == Ecreq12Mode::kStoppingTimeBound) {
        c_stop.add(aeb::stopping_time(r.v_at_brake, scenario.brake) +
                   cfg.ecreq12_margin - duration);
      } else {
        const double d2 = scenario.d_initial - scenario.v_initial * *r.t2;
        c_stop.add(duration - aeb::ttr({d2, scenario.v_initial}, scenario.brake));
      }
    }
    if (r.t1 && r.t2) {
      c_lead.add(constraint_slack(lead, *r.t1, *r.t2));
      leads.push_back(*r.t2 - *r.t1);
    }
    if (r.t_acq) c_acq.add(constraint_slack(acq, 0.0, *r.t_acq));
    if (r.t_det) c_det.add(constraint_slack(det, 0.0, *r.t_det));
    if (r.t_trj) c_trj.add(constraint_slack(trj, 0.0, *r.t_trj));
    if (r.t_col) c_col.add(constraint_slack(col, 0.0, *r.t_col));
    if (r.t_wrn) c_wrn.add(constraint_slack(wrn, 0.0, *r.t_wrn));
    c_safe.add(r.collided ? -1.0 : 0.0);
    if (r.pipeline_latency) {
      out.max_pipeline_latency =
          std::max(out.max_pipeline_latency.value_or(*r.pipeline_latency),
                   *r.pipeline_latency);
    }
  }

  auto& reqs = out.requirements;
  reqs.push_back(outcome("ECREQ-1.1", "average deceleration t2..t4 >= a_const*(1-tol)",
                         c_decel, cfg));
  reqs.push_back(outcome("ECREQ-1.2",
                         cfg.ecreq12_mode == Ecreq12Mode::kStoppingTimeBound
                             ? "t4-t2 <= stopping_time(v(t2)) + margin"
                             : "t4-t2 >= TTR(d(t2), v)",
                         c_stop, cfg));
  reqs.push_back(outcome("ECREQ-2", "t2-t1 >= warning lead", c_lead, cfg));
  reqs.push_back(outcome("ACQ", "t_acq <= ACQ budget", c_acq, cfg));
  reqs.push_back(outcome("DET", "t_det <= DET budget", c_det, cfg));
  reqs.push_back(outcome("TRJ", "t_trj <= TRJ budget", c_trj, cfg));
  reqs.push_back(outcome("COL", "t_col <= COL budget", c_col, cfg));
  reqs.push_back(outcome("WRN", "t_wrn <= WRN budget", c_wrn, cfg));

  RequirementOutcome error_rate = outcome("DET-ERROR-RATE", "", c_acq, cfg);
  error_rate.description = "fraction of runs over the ACQ budget <= limit";
  if (!cfg.admissible.contains(error_rate.id)) error_rate.admissible = cfg.det_error_rate_limit;
  error_rate.passed = error_rate.violation_fraction <= error_rate.admissible;
  reqs.push_back(error_rate);
  reqs.push_back(outcome("TREQ-1", "no collision", c_safe, cfg));

  double worst = 0.0;
  for (const char* id : {"ACQ", "DET", "TRJ", "COL", "WRN"}) {
    const auto* o = out.find(id);
    if (o->violation_fraction > worst) {
      worst = o->violation_fraction;
      out.dominant_budget = o->id;
    }
  }

  if (!leads.empty()) {
    std::sort(leads.begin(), leads.end());
    auto q = [&](double p) {
      const double pos = p * static_cast<double>(leads.size() - 1);
      const auto lo = static_cast<std::size_t>(pos);
      const auto hi = std::min(lo + 1, leads.size() - 1);
      return leads[lo] + (leads[hi] - leads[lo]) * (pos - static_cast<double>(lo));
    };
    out.warning_lead_p1 = q(0.01);
    out.warning_lead_p50 = q(0.50);
    out.warning_lead_p99 = q(0.99);
  }
  return out;
}

void apply_parameter(SimScenario& s, std::string_view parameter, double value) {
  if (parameter == "f_sensor") {
    s.sensor.f_sensor = value;
  } else if (parameter == "f_trj") {
    s.f_trj = value;
  } else if (parameter == "f_brake") {
    s.f_brake = value;
  } else if (parameter == "r_g") {
    s.sensor.r_g = value;
  } else if (parameter == "r_max") {
    s.sensor.r_max = value;
  } else if (parameter == "v_initial") {
    s.v_initial = value;
  } else if (parameter == "a_const") {
    s.brake.a_const = value;
  } else if (parameter == "t_response") {
    s.brake.t_response = value;
  } else {
    throw std::invalid_argument("unknown sweep parameter '" + std::string(parameter) + "'");
  }
}

std::vector<SweepPoint> sweep(const SimScenario& scenario, std::string_view parameter,
                              std::span<const double> values, unsigned threads) {
  {
    SimScenario probe = scenario;
    apply_parameter(probe, parameter, 0.0);
  }
  std::vector<SimScenario> variants;
  variants.reserve(values.size());
  for (double value : values) {
    SimScenario s = scenario;
    apply_parameter(s, parameter, value);
    s.validate();
    variants.push_back(std::move(s));
  }
  std::vector<SweepPoint> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const auto records = run_monte_carlo(variants[i], threads);
    out.push_back({values[i], summarize_batch(variants[i], records)});
  }
  return out;
}

}  // namespace ecsim::sim
