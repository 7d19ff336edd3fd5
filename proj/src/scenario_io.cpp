#include "ecsim/scenario_io.hpp"

namespace ecsim::sim {

using namespace json_detail;

namespace {

void reject_unknown(const nlohmann::json& object, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
  const auto extra = unknown_keys(object, allowed);
  if (!extra.empty()) {
    throw InputError(where + ": unknown key '" + extra.front() + "'");
  }
}

void read_number(const nlohmann::json& object, const char* key,
                 const std::string& where, double& target) {
  if (auto it = object.find(key); it != object.end()) {
    target = as_number(*it, where + "." + key);
  }
}

std::uint64_t as_unsigned(const nlohmann::json& value, const std::string& where) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer() && value.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(value.get<std::int64_t>());
  }
  throw InputError(where + ": expected non-negative integer");
}

std::string_view mode_name(Ecreq12Mode mode) {
  return mode == Ecreq12Mode::kLiteral ? "literal" : "stopping_time_bound";
}

void read_requirements(const nlohmann::json& doc, RequirementConfig& r) {
  const std::string where = "scenario.requirements";
  expect_object(doc, where);
  reject_unknown(doc, where,
                 {"budgets", "decel_tolerance", "ecreq12", "det_error_rate_limit",
                  "admissible"});
  if (auto it = doc.find("budgets"); it != doc.end()) {
    const std::string w = where + ".budgets";
    expect_object(*it, w);
    reject_unknown(*it, w, {"ACQ", "DET", "TRJ", "COL", "WRN"});
    read_number(*it, "ACQ", w, r.budget_acq);
    read_number(*it, "DET", w, r.budget_det);
    read_number(*it, "TRJ", w, r.budget_trj);
    read_number(*it, "COL", w, r.budget_col);
    read_number(*it, "WRN", w, r.budget_wrn);
  }
  read_number(doc, "decel_tolerance", where, r.decel_tolerance);
  read_number(doc, "det_error_rate_limit", where, r.det_error_rate_limit);
  if (auto it = doc.find("ecreq12"); it != doc.end()) {
    const std::string w = where + ".ecreq12";
    expect_object(*it, w);
    reject_unknown(*it, w, {"mode", "margin_s"});
    if (auto m = it->find("mode"); m != it->end()) {
      const auto mode = as_string(*m, w + ".mode");
      if (mode == "literal") {
        r.ecreq12_mode = Ecreq12Mode::kLiteral;
      } else if (mode == "stopping_time_bound") {
        r.ecreq12_mode = Ecreq12Mode::kStoppingTimeBound;
      } else {
        throw InputError(w + ".mode: expected 'stopping_time_bound' or 'literal'");
      }
    }
    read_number(*it, "margin_s", w, r.ecreq12_margin);
  }
  if (auto it = doc.find("admissible"); it != doc.end()) {
    const std::string w = where + ".admissible";
    expect_object(*it, w);
    for (const auto& [id, value] : it->items()) {
      r.admissible[id] = as_number(value, w + "." + id);
    }
  }
}

}  // namespace

LatencySpec latency_from_json(const nlohmann::json& doc, std::string_view where_view) {
  const std::string where(where_view);
  expect_object(doc, where);
  const auto kind = as_string(require(doc, "distribution", where), where + ".distribution");
  if (kind == "constant") {
    reject_unknown(doc, where, {"distribution", "value"});
    return LatencySpec::constant(as_number(require(doc, "value", where), where + ".value"));
  }
  if (kind == "uniform") {
    reject_unknown(doc, where, {"distribution", "min", "max"});
    return LatencySpec::uniform(as_number(require(doc, "min", where), where + ".min"),
                                as_number(require(doc, "max", where), where + ".max"));
  }
  throw InputError(where + ".distribution: expected 'constant' or 'uniform'");
}

nlohmann::json latency_to_json(const LatencySpec& spec) {
  if (spec.kind() == LatencySpec::Kind::kConstant) {
    return {{"distribution", "constant"}, {"value", spec.min()}};
  }
  return {{"distribution", "uniform"}, {"min", spec.min()}, {"max", spec.max()}};
}

SimScenario scenario_from_json(const nlohmann::json& doc) {
  const std::string where = "scenario";
  expect_object(doc, where);
  reject_unknown(doc, where,
                 {"v_initial", "d_initial", "brake", "sensor", "f_trj", "f_brake",
                  "warning_lead", "prediction_horizon",
                  "constant_detection_probability", "latencies", "seed", "runs",
                  "requirements"});
  SimScenario s;
  read_number(doc, "v_initial", where, s.v_initial);
  read_number(doc, "d_initial", where, s.d_initial);
  read_number(doc, "f_trj", where, s.f_trj);
  read_number(doc, "f_brake", where, s.f_brake);
  read_number(doc, "warning_lead", where, s.warning_lead);
  if (auto it = doc.find("brake"); it != doc.end()) {
    expect_object(*it, where + ".brake");
    reject_unknown(*it, where + ".brake", {"a_const", "t_response"});
    read_number(*it, "a_const", where + ".brake", s.brake.a_const);
    read_number(*it, "t_response", where + ".brake", s.brake.t_response);
  }
  if (auto it = doc.find("sensor"); it != doc.end()) {
    expect_object(*it, where + ".sensor");
    reject_unknown(*it, where + ".sensor", {"r_g", "r_max", "f_sensor"});
    read_number(*it, "r_g", where + ".sensor", s.sensor.r_g);
    read_number(*it, "r_max", where + ".sensor", s.sensor.r_max);
    read_number(*it, "f_sensor", where + ".sensor", s.sensor.f_sensor);
  }
  if (auto it = doc.find("prediction_horizon"); it != doc.end() && !it->is_null()) {
    s.prediction_horizon = as_number(*it, where + ".prediction_horizon");
  }
  if (auto it = doc.find("constant_detection_probability");
      it != doc.end() && !it->is_null()) {
    s.constant_detection_probability =
        as_number(*it, where + ".constant_detection_probability");
  }
  if (auto it = doc.find("latencies"); it != doc.end()) {
    expect_object(*it, where + ".latencies");
    for (const auto& [name, value] : it->items()) {
      const auto f = parse_function(name);
      if (!f) throw InputError(where + ".latencies: unknown function '" + name + "'");
      s.latencies[*f] = latency_from_json(value, where + ".latencies." + name);
    }
  }
  if (auto it = doc.find("seed"); it != doc.end()) s.seed = as_unsigned(*it, where + ".seed");
  if (auto it = doc.find("runs"); it != doc.end()) s.runs = as_unsigned(*it, where + ".runs");
  if (auto it = doc.find("requirements"); it != doc.end()) {
    read_requirements(*it, s.requirements);
  }
  return s;
}

nlohmann::json scenario_to_json(const SimScenario& s) {
  nlohmann::json latencies = nlohmann::json::object();
  for (auto f : kAllFunctions) {
    latencies[std::string(function_name(f))] = latency_to_json(s.latencies[f]);
  }
  const auto& r = s.requirements;
  nlohmann::json admissible = nlohmann::json::object();
  for (const auto& [id, fraction] : r.admissible) admissible[id] = fraction;
  nlohmann::json doc = {
      {"v_initial", s.v_initial},
      {"d_initial", s.d_initial},
      {"brake", {{"a_const", s.brake.a_const}, {"t_response", s.brake.t_response}}},
      {"sensor",
       {{"r_g", s.sensor.r_g}, {"r_max", s.sensor.r_max}, {"f_sensor", s.sensor.f_sensor}}},
      {"f_trj", s.f_trj},
      {"f_brake", s.f_brake},
      {"warning_lead", s.warning_lead},
      {"prediction_horizon", s.effective_prediction_horizon()},
      {"latencies", latencies},
      {"seed", s.seed},
      {"runs", s.runs},
      {"requirements",
       {{"budgets",
         {{"ACQ", r.budget_acq},
          {"DET", r.budget_det},
          {"TRJ", r.budget_trj},
          {"COL", r.budget_col},
          {"WRN", r.budget_wrn}}},
        {"decel_tolerance", r.decel_tolerance},
        {"ecreq12", {{"mode", std::string(mode_name(r.ecreq12_mode))},
                     {"margin_s", r.ecreq12_margin}}},
        {"det_error_rate_limit", r.det_error_rate_limit},
        {"admissible", admissible}}}};
  if (s.constant_detection_probability) {
    doc["constant_detection_probability"] = *s.constant_detection_probability;
  }
  return doc;
}

SimScenario load_scenario(const std::filesystem::path& path) {
  const auto doc = read_json_file(path);
  try {
    return scenario_from_json(doc);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace ecsim::sim
