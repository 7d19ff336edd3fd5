#include "ecsim/cli.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "ecsim/analysis.hpp"
#include "ecsim/compliance.hpp"
#include "ecsim/dynamics.hpp"
#include "ecsim/json_io.hpp"
#include "ecsim/model_io.hpp"
#include "ecsim/scenario_io.hpp"
#include "ecsim/traceability_io.hpp"

namespace ecsim::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Raised for bad flag values detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double value, const char* format = "%.6f") {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, format, value);
  return buffer;
}

std::string pad(std::string text, std::size_t width) {
  if (text.size() < width) text.append(width - text.size(), ' ');
  return text;
}

json optional_json(const std::optional<double>& value) {
  return value ? json(*value) : json(nullptr);
}

double parse_double(std::string_view text, const std::string& what) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw UsageError(what + ": invalid number '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_seed(const std::string& text, const std::string& what) {
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || end != text.data() + text.size()) {
    throw UsageError(what + ": invalid seed '" + text + "'");
  }
  return value;
}

void print_findings(std::ostream& out, std::string_view scope, const ValidationReport& report) {
  for (const auto& f : report) out << scope << ": " << format_finding(f) << '\n';
}

// ---------------------------------------------------------------- validate

int cmd_validate(const fs::path& path, std::ostream& out) {
  const auto doc = read_json_file(path);
  std::size_t total = 0;
  auto emit = [&](std::string_view scope, const ValidationReport& report) {
    print_findings(out, scope, report);
    total += report.size();
  };

  if (looks_like_traceability(doc)) {
    TraceabilityDocument trace;
    try {
      trace = traceability_from_json(doc, path.parent_path());
    } catch (const InputError& e) {
      throw InputError(path.string() + ": " + e.what());
    }
    emit("traceability", trace.schema_findings);
    for (const auto& model : trace.models) emit(model.id, validate_model(model));
    emit("requirements", validate_trace_chain(trace.requirements, trace.models));
    for (const auto& map : trace.refinements) {
      const auto* black = trace.find_model(map.black_model);
      const auto* white = trace.find_model(map.white_model);
      if (black == nullptr || white == nullptr) {
        emit(map.id, {Finding{"unknown-model",
                              {black == nullptr ? map.black_model : map.white_model},
                              "refinement references a model that is not loaded"}});
        continue;
      }
      if (!validate_model(*black).empty() || !validate_model(*white).empty()) continue;
      try {
        emit(map.id, check_refinement(map, *black, *white));
      } catch (const std::invalid_argument& e) {
        emit(map.id, {Finding{"model-roles", {map.id}, e.what()}});
      }
    }
    for (const auto& e2e : trace.end_to_end) {
      if (trace.find_model(e2e.model) == nullptr) {
        emit(e2e.constraint.id,
             {Finding{"unknown-model", {e2e.model}, "end-to-end constraint on unknown model"}});
      }
    }
  } else {
    LoadedModel loaded;
    try {
      loaded = model_from_json(doc);
    } catch (const InputError& e) {
      throw InputError(path.string() + ": " + e.what());
    }
    emit(loaded.model.id, loaded.schema_findings);
    emit(loaded.model.id, validate_model(loaded.model));
  }
  out << "findings: " << total << '\n';
  return total == 0 ? kExitOk : kExitViolations;
}

// ------------------------------------------------------------ refine-check

void print_budget_report(std::ostream& out, const BudgetReport& r,
                         const TimingConstraint& c) {
  out << "  end-to-end " << c.id << " (" << c.from_step << " -> " << c.to_step << ", max "
      << num(c.bound_seconds * 1e3, "%.3f") << " ms)\n";
  out << "    " << pad("segment", 10) << pad("from", 18) << pad("to", 18)
      << pad("function", 10) << "budget_ms\n";
  for (const auto& s : r.per_segment) {
    out << "    " << pad(s.id, 10) << pad(s.from_step, 18) << pad(s.to_step, 18)
        << pad(s.function.empty() ? "-" : s.function, 10)
        << num(to_nanoseconds(s.budget_seconds).count() / 1e6, "%.3f") << '\n';
  }
  const auto slack_ns = r.bound - r.sum;
  out << "    sum " << num(r.sum.count() / 1e6, "%.3f") << " ms, bound "
      << num(r.bound.count() / 1e6, "%.3f") << " ms, slack "
      << num(slack_ns.count() / 1e6, "%.3f") << " ms: "
      << (r.satisfied ? "satisfied" : "violated") << '\n';
}

int cmd_refine_check(const fs::path& path, const std::optional<fs::path>& scenario_path,
                     std::ostream& out, std::ostream& err) {
  const auto doc = load_traceability(path);
  if (!doc.schema_findings.empty()) {
    print_findings(err, "traceability", doc.schema_findings);
    return kExitInputError;
  }
  std::optional<sim::SimScenario> scenario;
  if (scenario_path) {
    scenario = sim::load_scenario(*scenario_path);
    scenario->validate();
  }
  if (doc.refinements.empty()) {
    err << path.string() << ": no refinement maps\n";
    return kExitInputError;
  }

  bool ok = true;
  for (const auto& map : doc.refinements) {
    const auto* black = doc.find_model(map.black_model);
    const auto* white = doc.find_model(map.white_model);
    if (black == nullptr || white == nullptr) {
      err << "refinement " << map.id << ": unknown model "
          << (black == nullptr ? map.black_model : map.white_model) << '\n';
      return kExitInputError;
    }
    out << "refinement " << map.id << " (" << map.black_model << " -> " << map.white_model
        << ")\n";
    ValidationReport findings;
    try {
      findings = check_refinement(map, *black, *white);
    } catch (const InvalidModelError& e) {
      print_findings(out, "  model", e.report());
      ok = false;
      continue;
    } catch (const std::invalid_argument& e) {
      err << "refinement " << map.id << ": " << e.what() << '\n';
      return kExitInputError;
    }
    if (!findings.empty()) {
      print_findings(out, "  refinement", findings);
      out << "  budgeting skipped\n";
      ok = false;
      continue;
    }
    out << "  refinement: ok\n";
    for (const auto& e2e : doc.end_to_end) {
      if (e2e.model != map.black_model) continue;
      try {
        const auto report = check_budgeting(map, e2e.constraint, *black, *white);
        print_budget_report(out, report, e2e.constraint);
        ok = ok && report.satisfied;
      } catch (const std::invalid_argument& e) {
        out << "  end-to-end " << e2e.constraint.id << ": " << e.what() << '\n';
        ok = false;
      }
    }
    if (!map.budgets.empty()) {
      const auto bound = analysis::analytic_end_to_end(map, analysis::budget_latency_table(map));
      out << "  analytic (budgets as Uniform(b/2, b)): worst " << num(bound.worst_case * 1e3, "%.3f")
          << " ms, best " << num(bound.best_case * 1e3, "%.3f") << " ms\n";
      if (scenario) {
        const auto table = analysis::analytic_end_to_end(
            map, analysis::latency_table(scenario->latencies));
        out << "  analytic (scenario latencies): worst " << num(table.worst_case * 1e3, "%.3f")
            << " ms, best " << num(table.best_case * 1e3, "%.3f") << " ms\n";
      }
    }
  }
  return ok ? kExitOk : kExitViolations;
}

// ---------------------------------------------------------------- simulate

struct SimOptions {
  std::optional<std::uint64_t> runs;
  std::optional<std::string> seed;
  std::vector<std::string> admissible;
  unsigned threads = 0;
};

sim::SimScenario prepare_scenario(const fs::path& path, const SimOptions& options) {
  auto scenario = sim::load_scenario(path);
  if (options.seed) {
    scenario.seed = parse_seed(*options.seed, "--seed");
  } else if (const char* env = std::getenv("ECSIM_SEED"); env != nullptr && *env != '\0') {
    scenario.seed = parse_seed(env, "ECSIM_SEED");
  }
  if (options.runs) scenario.runs = *options.runs;
  for (const auto& entry : options.admissible) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("--admissible expects ID=FRACTION, got '" + entry + "'");
    }
    scenario.requirements.admissible[entry.substr(0, eq)] =
        parse_double(std::string_view(entry).substr(eq + 1), "--admissible");
  }
  scenario.validate();
  return scenario;
}

unsigned worker_count(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

json summary_json(const sim::BatchSummary& s) {
  json reqs = json::array();
  for (const auto& o : s.requirements) {
    reqs.push_back({{"id", o.id},
                    {"description", o.description},
                    {"observable", o.observable},
                    {"violations", o.violations},
                    {"violation_fraction", o.violation_fraction},
                    {"admissible", o.admissible},
                    {"passed", o.passed}});
  }
  return {{"runs", s.runs},
          {"detected", s.detected},
          {"braked", s.braked},
          {"collisions", s.collisions},
          {"early_detections", s.early_detections},
          {"collisions_after_early_detection", s.collisions_after_early_detection},
          {"dominant_budget", s.dominant_budget ? json(*s.dominant_budget) : json(nullptr)},
          {"warning_lead_p1", optional_json(s.warning_lead_p1)},
          {"warning_lead_p50", optional_json(s.warning_lead_p50)},
          {"warning_lead_p99", optional_json(s.warning_lead_p99)},
          {"max_pipeline_latency", optional_json(s.max_pipeline_latency)},
          {"all_passed", s.all_passed()},
          {"requirements", reqs}};
}

json histogram_json(const analysis::HistogramSummary& h) {
  return {{"metric", h.metric},         {"observable", h.observable},
          {"unobservable", h.unobservable}, {"violations", h.violations},
          {"violation_fraction", h.violation_fraction},
          {"bound", optional_json(h.bound)},
          {"p1", h.p1}, {"p50", h.p50}, {"p99", h.p99}, {"mean", h.mean},
          {"min", h.min}, {"max", h.max}, {"edges", h.edges}, {"counts", h.counts}};
}

json record_json(const sim::RunRecord& r) {
  json latencies = json::object();
  for (auto f : sim::kAllFunctions) {
    latencies[std::string(sim::function_name(f))] = r.latencies[f];
  }
  return {{"run", r.run_index},
          {"t0", optional_json(r.t0)},
          {"t_detect", optional_json(r.t_detect)},
          {"t1", optional_json(r.t1)},
          {"t2", optional_json(r.t2)},
          {"t3", optional_json(r.t3)},
          {"t4", optional_json(r.t4)},
          {"t_collision", optional_json(r.t_collision)},
          {"t_acq", optional_json(r.t_acq)},
          {"t_det", optional_json(r.t_det)},
          {"t_trj", optional_json(r.t_trj)},
          {"t_col", optional_json(r.t_col)},
          {"t_wrn", optional_json(r.t_wrn)},
          {"d_at_detection", optional_json(r.d_at_detection)},
          {"pipeline_latency", optional_json(r.pipeline_latency)},
          {"min_distance", r.min_distance},
          {"collided", r.collided},
          {"latencies", latencies}};
}

void print_summary(std::ostream& out, const sim::SimScenario& scenario,
                   const sim::BatchSummary& s) {
  out << "runs " << s.runs << ", seed " << scenario.seed << ", f_sensor "
      << num(scenario.sensor.f_sensor, "%g") << " Hz\n";
  out << pad("requirement", 16) << pad("observable", 12) << pad("violations", 12)
      << pad("fraction", 12) << pad("admissible", 12) << "result\n";
  for (const auto& o : s.requirements) {
    out << pad(o.id, 16) << pad(std::to_string(o.observable), 12)
        << pad(std::to_string(o.violations), 12) << pad(num(o.violation_fraction), 12)
        << pad(num(o.admissible), 12) << (o.passed ? "pass" : "FAIL") << '\n';
  }
  out << "dominant violated budget: " << s.dominant_budget.value_or("none") << '\n';
  if (s.warning_lead_p50) {
    out << "warning lead p1/p50/p99: " << num(*s.warning_lead_p1, "%.4f") << " / "
        << num(*s.warning_lead_p50, "%.4f") << " / " << num(*s.warning_lead_p99, "%.4f")
        << " s\n";
  }
  if (s.max_pipeline_latency) {
    out << "max pre-brake pipeline latency: " << num(*s.max_pipeline_latency * 1e3, "%.3f")
        << " ms\n";
  }
  out << "collisions: " << s.collisions << " (" << s.collisions_after_early_detection
      << " of " << s.early_detections << " runs detected at d >= r_g)\n";
}

int cmd_simulate(const fs::path& path, const SimOptions& options, const fs::path& out_dir,
                 bool write_trace, std::size_t bins, std::ostream& out) {
  const auto scenario = prepare_scenario(path, options);
  const auto records = sim::run_monte_carlo(scenario, worker_count(options.threads));
  const auto summary = sim::summarize_batch(scenario, records);

  fs::create_directories(out_dir);
  json histograms = json::object();
  const std::pair<analysis::Metric, TimingConstraint> metrics[] = {
      {analysis::Metric::kWarningLead,
       {"ECREQ-2", ConstraintKind::kLatency, "", "", scenario.warning_lead, Direction::kMin}},
      {analysis::Metric::kTAcq,
       {"ACQ", ConstraintKind::kLatency, "", "", scenario.requirements.budget_acq,
        Direction::kMax}},
  };
  for (const auto& [metric, constraint] : metrics) {
    const std::string name(analysis::metric_name(metric));
    try {
      const auto h = analysis::summarize(records, metric, constraint, bins);
      write_text_file(out_dir / ("hist_" + name + ".csv"), analysis::histogram_csv(h));
      write_text_file(out_dir / ("hist_" + name + ".svg"), analysis::histogram_svg(h));
      histograms[name] = histogram_json(h);
    } catch (const std::invalid_argument&) {
      histograms[name] = nullptr;
      out << "histogram " << name << ": no observable runs\n";
    }
  }

  json runs = json::array();
  for (const auto& r : records) runs.push_back(record_json(r));
  const json results = {{"scenario", sim::scenario_to_json(scenario)},
                        {"summary", summary_json(summary)},
                        {"histograms", histograms},
                        {"runs", runs}};
  write_text_file(out_dir / "results.json", results.dump(2) + "\n");
  if (write_trace) {
    write_text_file(out_dir / "trace.csv", analysis::write_trace_csv(records));
  }

  print_summary(out, scenario, summary);
  out << "outputs written to " << out_dir.string() << '\n';
  return summary.all_passed() ? kExitOk : kExitViolations;
}

// -------------------------------------------------------------- eval-trace

analysis::Binding load_binding(const fs::path& path) {
  const auto doc = read_json_file(path);
  if (!doc.is_object()) throw InputError(path.string() + ": expected object step -> event");
  analysis::Binding binding;
  for (const auto& [step, event] : doc.items()) {
    if (!event.is_string()) {
      throw InputError(path.string() + ": binding of " + step + " must be a string");
    }
    const auto name = event.get<std::string>();
    if (!sim::parse_event_name(name)) {
      throw InputError(path.string() + ": unknown event name '" + name + "' for step " + step);
    }
    binding[step] = name;
  }
  return binding;
}

int cmd_eval_trace(const fs::path& model_path, const fs::path& trace_path,
                   const fs::path& binding_path, const std::optional<fs::path>& json_out,
                   std::ostream& out, std::ostream& err) {
  const auto loaded = load_model(model_path);
  if (!loaded.schema_findings.empty()) {
    print_findings(err, loaded.model.id, loaded.schema_findings);
    return kExitInputError;
  }
  if (const auto report = validate_model(loaded.model); !report.empty()) {
    print_findings(err, loaded.model.id, report);
    return kExitInputError;
  }
  const auto binding = load_binding(binding_path);
  try {
    analysis::check_binding(loaded.model, binding);
  } catch (const std::invalid_argument& e) {
    err << binding_path.string() << ": " << e.what() << '\n';
    return kExitInputError;
  }
  auto traces = analysis::parse_trace_csv(read_text_file(trace_path), trace_path.string());
  if (traces.empty()) traces.push_back({"-", {}});

  struct Tally {
    std::size_t satisfied = 0, violated = 0, not_observable = 0;
  };
  std::map<std::string, Tally> tallies;
  json results = json::array();
  bool violated = false;
  for (const auto& trace : traces) {
    for (const auto& r : analysis::evaluate_trace(loaded.model, trace, binding)) {
      out << "run=" << r.run_id << " constraint=" << r.constraint_id
          << " status=" << analysis::to_string(r.status);
      if (r.slack) out << " slack_s=" << num(*r.slack, "%.17g");
      if (r.measured) out << " measured_s=" << num(*r.measured, "%.17g");
      if (!r.note.empty()) out << " note=" << r.note;
      out << '\n';
      auto& t = tallies[r.constraint_id];
      switch (r.status) {
        case analysis::Verdict::kSatisfied:
          ++t.satisfied;
          break;
        case analysis::Verdict::kViolated:
          ++t.violated;
          violated = true;
          break;
        case analysis::Verdict::kNotObservable:
          ++t.not_observable;
          break;
      }
      results.push_back({{"constraint", r.constraint_id},
                         {"run", r.run_id},
                         {"status", std::string(analysis::to_string(r.status))},
                         {"slack_s", optional_json(r.slack)}});
    }
  }
  for (const auto& c : loaded.model.constraints) {
    const auto& t = tallies[c.id];
    out << "summary constraint=" << c.id << " satisfied=" << t.satisfied
        << " violated=" << t.violated << " not_observable=" << t.not_observable << '\n';
  }
  if (json_out) write_text_file(*json_out, results.dump(2) + "\n");
  return violated ? kExitViolations : kExitOk;
}

// ------------------------------------------------------------------- sweep

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  if (text.empty()) return values;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    values.push_back(parse_double(std::string_view(text).substr(start, comma - start),
                                  "--values"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

int cmd_sweep(const fs::path& path, const SimOptions& options, const std::string& param,
              const std::string& values_text, const fs::path& csv_path, std::ostream& out) {
  const auto values = parse_values(values_text);
  const auto scenario = prepare_scenario(path, options);
  const auto points = sim::sweep(scenario, param, values, worker_count(options.threads));

  std::string csv = "parameter,value,runs";
  const std::vector<std::string> ids = {"ECREQ-1.1", "ECREQ-1.2", "ECREQ-2", "ACQ",
                                        "DET",       "TRJ",       "COL",     "WRN",
                                        "DET-ERROR-RATE", "TREQ-1"};
  for (const auto& id : ids) csv += "," + id;
  csv += ",lead_p1_s,lead_p50_s,lead_p99_s,dominant_budget,collisions,all_passed\n";

  out << pad(param, 12) << pad("ECREQ-2", 12) << pad("ACQ", 12) << pad("TREQ-1", 12)
      << pad("lead_p50_s", 12) << pad("lead_p99_s", 12) << "dominant\n";
  bool ok = true;
  auto opt = [](const std::optional<double>& v) { return v ? num(*v, "%.17g") : std::string(); };
  for (const auto& p : points) {
    const auto& s = p.summary;
    ok = ok && s.all_passed();
    csv += param + "," + num(p.value, "%.17g") + "," + std::to_string(s.runs);
    for (const auto& id : ids) csv += "," + num(s.find(id)->violation_fraction, "%.17g");
    csv += "," + opt(s.warning_lead_p1) + "," + opt(s.warning_lead_p50) + "," +
           opt(s.warning_lead_p99) + "," + s.dominant_budget.value_or("") + "," +
           std::to_string(s.collisions) + "," + (s.all_passed() ? "true" : "false") + "\n";
    out << pad(num(p.value, "%g"), 12) << pad(num(s.find("ECREQ-2")->violation_fraction), 12)
        << pad(num(s.find("ACQ")->violation_fraction), 12)
        << pad(num(s.find("TREQ-1")->violation_fraction), 12)
        << pad(s.warning_lead_p50 ? num(*s.warning_lead_p50, "%.4f") : "-", 12)
        << pad(s.warning_lead_p99 ? num(*s.warning_lead_p99, "%.4f") : "-", 12)
        << s.dominant_budget.value_or("none") << '\n';
  }
  if (csv_path.has_parent_path()) fs::create_directories(csv_path.parent_path());
  write_text_file(csv_path, csv);
  out << "sweep written to " << csv_path.string() << '\n';
  return ok ? kExitOk : kExitViolations;
}

// ----------------------------------------------------------------- physics

struct PhysicsOptions {
  double v = 30.0;
  aeb::BrakeParams brake;
  aeb::SensorParams sensor;
  double lead = 0.8;
};

int cmd_physics(const PhysicsOptions& o, std::ostream& out) {
  aeb::validate(o.sensor);
  const double s_stop = aeb::stopping_distance(o.v, o.brake);
  const double t_stop = aeb::stopping_time(o.v, o.brake);
  const double v_rem = aeb::remaining_speed(o.v, o.brake);
  const auto at_response = aeb::deceleration_profile(o.brake.t_response, o.brake, o.v);
  auto line = [&](const char* key, double value, const char* unit) {
    out << pad(key, 30) << num(value, "%.10g") << ' ' << unit << '\n';
  };
  line("v_initial", o.v, "m/s");
  line("a_const", o.brake.a_const, "m/s^2");
  line("t_response", o.brake.t_response, "s");
  line("v_remaining", v_rem, "m/s");
  line("response_distance", at_response.distance_traveled, "m");
  line("stopping_distance", s_stop, "m");
  line("stopping_time", t_stop, "s");
  line("brake_trigger_distance", s_stop, "m");
  line("warning_trigger_distance", s_stop + o.v * o.lead, "m");
  line("guaranteed_detection_range", o.sensor.r_g, "m");
  line("detection_reserve", o.sensor.r_g - s_stop, "m");
  line("detection_reserve_time", (o.sensor.r_g - s_stop) / o.v, "s");
  line("p_detect_at_r_max", aeb::detection_probability(o.sensor.r_max, o.sensor), "");
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Event-chain timing verification for an AEB function", "ecsim"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  std::string path;
  auto* validate = app.add_subcommand("validate", "Check a model or traceability file");
  validate->add_option("file", path, "Model or traceability JSON")->required();

  std::string scenario_for_bounds;
  auto* refine = app.add_subcommand("refine-check", "Check refinement maps and budgets");
  refine->add_option("traceability", path, "Traceability JSON")->required();
  refine->add_option("--scenario", scenario_for_bounds,
                     "Scenario whose latency table feeds a second analytic bound");

  SimOptions sim_options;
  std::uint64_t runs_flag = 0;
  std::string seed_flag;
  std::string out_dir = "ecsim-out";
  bool trace_flag = false;
  std::size_t bins = 40;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulation of a scenario");
  simulate->add_option("scenario", path, "Scenario JSON")->required();
  auto* runs_opt = simulate->add_option("--runs", runs_flag, "Number of runs")
                       ->check(CLI::PositiveNumber);
  auto* seed_opt = simulate->add_option("--seed", seed_flag, "Master seed (overrides ECSIM_SEED)");
  simulate->add_option("--out", out_dir, "Output directory")->capture_default_str();
  simulate->add_flag("--trace", trace_flag, "Write trace.csv");
  simulate->add_option("--threads", sim_options.threads, "Worker threads (0: all cores)");
  simulate->add_option("--admissible", sim_options.admissible,
                       "Admissible violation fraction, ID=FRACTION (repeatable)");
  simulate->add_option("--bins", bins, "Histogram bins")->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string model_path;
  std::string trace_path;
  std::string binding_path;
  std::string json_out;
  auto* eval = app.add_subcommand("eval-trace", "Evaluate model constraints over a trace CSV");
  eval->add_option("model", model_path, "Model JSON")->required();
  eval->add_option("trace", trace_path, "Trace CSV (run,time_s,event)")->required();
  eval->add_option("binding", binding_path, "Binding JSON (step id -> event name)")->required();
  eval->add_option("--json", json_out, "Write results JSON here");

  std::string param;
  std::string values_text;
  std::string sweep_csv = "sweep.csv";
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo batch per parameter value");
  sweep_cmd->add_option("scenario", path, "Scenario JSON")->required();
  sweep_cmd->add_option("--param", param, "Parameter name")->required();
  sweep_cmd->add_option("--values", values_text, "Comma-separated values")->required();
  sweep_cmd->add_option("--out", sweep_csv, "Combined CSV path")->capture_default_str();
  auto* sweep_runs = sweep_cmd->add_option("--runs", runs_flag, "Runs per value")
                         ->check(CLI::PositiveNumber);
  auto* sweep_seed = sweep_cmd->add_option("--seed", seed_flag, "Master seed");
  sweep_cmd->add_option("--threads", sim_options.threads, "Worker threads (0: all cores)");

  PhysicsOptions physics_options;
  auto* physics = app.add_subcommand("physics", "Print braking and sensing quantities");
  physics->add_option("--v", physics_options.v, "Initial speed, m/s")->capture_default_str();
  physics->add_option("--a", physics_options.brake.a_const, "Deceleration, m/s^2")
      ->capture_default_str();
  physics->add_option("--tr", physics_options.brake.t_response, "Brake ramp time, s")
      ->capture_default_str();
  physics->add_option("--lead", physics_options.lead, "Warning lead, s")->capture_default_str();
  physics->add_option("--rg", physics_options.sensor.r_g, "Guaranteed detection range, m")
      ->capture_default_str();
  physics->add_option("--rmax", physics_options.sensor.r_max, "Maximum sensor range, m")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (runs_opt->count() > 0 || sweep_runs->count() > 0) sim_options.runs = runs_flag;
    if (seed_opt->count() > 0 || sweep_seed->count() > 0) sim_options.seed = seed_flag;

    if (*validate) return cmd_validate(path, out);
    if (*refine) {
      std::optional<fs::path> scenario;
      if (!scenario_for_bounds.empty()) scenario = scenario_for_bounds;
      return cmd_refine_check(path, scenario, out, err);
    }
    if (*simulate) return cmd_simulate(path, sim_options, out_dir, trace_flag, bins, out);
    if (*eval) {
      std::optional<fs::path> json_path;
      if (!json_out.empty()) json_path = json_out;
      return cmd_eval_trace(model_path, trace_path, binding_path, json_path, out, err);
    }
    if (*sweep_cmd) return cmd_sweep(path, sim_options, param, values_text, sweep_csv, out);
    if (*physics) return cmd_physics(physics_options, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const InvalidModelError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace ecsim::cli
