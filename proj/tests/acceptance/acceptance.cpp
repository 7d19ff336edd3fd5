// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "ecsim/analysis.hpp"
#include "ecsim/cli.hpp"
#include "ecsim/dynamics.hpp"
#include "ecsim/json_io.hpp"
#include "ecsim/model_io.hpp"
#include "ecsim/scenario_io.hpp"
#include "ecsim/traceability_io.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ecsim;

namespace {

constexpr double kPhysicsTol = 1e-9;
constexpr double kSensorTol = 1e-12;
constexpr double kBaselineLow = 0.10;
constexpr double kBaselineHigh = 0.35;
constexpr double kOptimizedMax = 0.05;
constexpr double kZOneSided99 = 2.326;
constexpr double kOracleSlackTol = 1e-12;
constexpr double kIntegrationTol = 1e-6;
constexpr std::uint64_t kRuns = 10000;
constexpr std::uint64_t kOracleRuns = 1000;
constexpr int kIntegrationDraws = 1000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

fs::path data(const std::string& name) { return fs::path(ECSIM_DATA_DIR) / name; }

fs::path scratch(const std::string& name) {
  const auto dir = fs::path(ECSIM_TEST_TMP) / "acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string fmt(const char* format, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, format, value);
  return buffer;
}

int ecsim(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (out) *out = o.str() + e.str();
  return code;
}

analysis::Binding load_binding(const char* name) {
  analysis::Binding b;
  const auto doc = read_json_file(data(name));
  for (auto it = doc.begin(); it != doc.end(); ++it) b[it.key()] = it.value().get<std::string>();
  return b;
}

const json& requirement(const json& results, const std::string& id) {
  for (const auto& r : results["summary"]["requirements"])
    if (r["id"] == id) return r;
  throw std::runtime_error("results.json lacks requirement " + id);
}

// One simulate invocation per fixture, shared by several criteria.
struct Batch {
  std::string fixture;
  fs::path dir;
  json results;
};

Batch simulate(const std::string& fixture, const std::string& tag, const std::string& threads) {
  Batch b{fixture, scratch(tag), {}};
  std::string log;
  const int code = ecsim({"simulate", data(fixture).string(), "--runs", std::to_string(kRuns),
                          "--trace", "--threads", threads, "--out", b.dir.string()},
                         &log);
  if (code == cli::kExitInputError) throw std::runtime_error("simulate failed: " + log);
  b.results = read_json_file(b.dir / "results.json");
  return b;
}

Batch& batch(const std::string& which) {
  if (which == "baseline") {
    static Batch baseline = simulate("aeb_baseline_scenario.json", "baseline", "0");
    return baseline;
  }
  static Batch optimized = simulate("aeb_optimized_scenario.json", "optimized", "0");
  return optimized;
}

Outcome physics() {
  const aeb::BrakeParams p{4.0, 0.6};
  const double s = aeb::stopping_distance(30.0, p);
  const double t = aeb::stopping_time(30.0, p);
  return {std::abs(s - 121.44) <= kPhysicsTol && std::abs(t - 7.8) <= kPhysicsTol,
          "s=" + fmt("%.12f", s) + " m, t=" + fmt("%.12f", t) + " s"};
}

Outcome sensor() {
  const aeb::SensorParams s{136.44, 160.44, 10.0};
  const double p_g = aeb::detection_probability(136.44, s);
  const double p_max = aeb::detection_probability(160.44, s);
  const double p_out = aeb::detection_probability(160.45, s);
  return {p_g == 1.0 && std::abs(p_max - std::exp(-1.0)) <= kSensorTol && p_out == 0.0,
          "p(r_g)=" + fmt("%.15g", p_g) + ", p(r_max)=" + fmt("%.15g", p_max) +
              ", p(r_max+0.01)=" + fmt("%g", p_out)};
}

Outcome budgets() {
  std::string log;
  const int code = ecsim({"refine-check", data("aeb_traceability.json").string()}, &log);
  const auto doc = load_traceability(data("aeb_traceability.json"));
  const auto& map = doc.refinements.at(0);
  const auto& e2e = doc.end_to_end.at(0);
  const auto report = check_budgeting(map, e2e.constraint, *doc.find_model(map.black_model),
                                      *doc.find_model(map.white_model));
  using std::chrono::milliseconds;
  const bool ok = code == cli::kExitOk && report.sum == milliseconds(500) &&
                  report.bound == milliseconds(500) && report.slack_seconds == 0.0 &&
                  report.satisfied && log.find("500.000") != std::string::npos;
  return {ok, "exit " + std::to_string(code) + ", sum " + std::to_string(report.sum.count()) +
                  " ns, bound " + std::to_string(report.bound.count()) + " ns, slack " +
                  fmt("%g", report.slack_seconds)};
}

Outcome baseline_result() {
  const auto& r = batch("baseline").results;
  const double f = requirement(r, "ECREQ-2")["violation_fraction"];
  const auto dominant = r["summary"]["dominant_budget"];
  const bool ok = f >= kBaselineLow && f <= kBaselineHigh && dominant == "ACQ";
  return {ok, "ECREQ-2 violation fraction " + fmt("%.4f", f) + ", dominant budget " +
                  dominant.dump()};
}

Outcome optimized_result() {
  const auto& base = requirement(batch("baseline").results, "ECREQ-2");
  const auto& opt = requirement(batch("optimized").results, "ECREQ-2");
  const double n1 = base["observable"], x1 = base["violations"];
  const double n2 = opt["observable"], x2 = opt["violations"];
  const double p1 = x1 / n1, p2 = x2 / n2, pooled = (x1 + x2) / (n1 + n2);
  const double z = (p1 - p2) / std::sqrt(pooled * (1 - pooled) * (1 / n1 + 1 / n2));
  return {p2 <= kOptimizedMax && z > kZOneSided99,
          "ECREQ-2 violation fraction " + fmt("%.4f", p2) + " vs baseline " + fmt("%.4f", p1) +
              ", z=" + fmt("%.2f", z)};
}

Outcome collision_safety() {
  std::size_t early = 0, bad = 0;
  for (const char* which : {"baseline", "optimized"}) {
    const auto& r = batch(which).results;
    const double r_g = r["scenario"]["sensor"]["r_g"];
    for (const auto& run : r["runs"]) {
      if (run["d_at_detection"].is_null() || run["d_at_detection"].get<double>() < r_g) continue;
      ++early;
      if (run["collided"].get<bool>() || run["min_distance"].get<double>() <= 0.0) ++bad;
    }
  }
  return {early > 0 && bad == 0, std::to_string(early) + " early detections, " +
                                     std::to_string(bad) + " unsafe"};
}

Outcome oracle_equivalence() {
  const auto black = load_model(data("aeb_blackbox.json")).model;
  const auto white = load_model(data("aeb_whitebox.json")).model;
  const auto black_binding = load_binding("aeb_blackbox_binding.json");
  const auto white_binding = load_binding("aeb_whitebox_binding.json");
  std::size_t compared = 0, mismatches = 0;
  double worst = 0.0;
  for (const char* fixture : {"aeb_baseline_scenario.json", "aeb_optimized_scenario.json"}) {
    auto scenario = sim::load_scenario(data(fixture));
    scenario.runs = kOracleRuns;
    const auto records = sim::run_monte_carlo(scenario);
    const auto traces = analysis::parse_trace_csv(analysis::write_trace_csv(records));
    if (traces.size() != records.size()) return {false, "trace count mismatch"};
    for (std::size_t i = 0; i < records.size(); ++i) {
      for (const auto& [model, binding] : {std::pair{&black, &black_binding},
                                           std::pair{&white, &white_binding}}) {
        const auto inline_v = analysis::evaluate_record(*model, records[i], *binding);
        const auto trace_v = analysis::evaluate_trace(*model, traces[i], *binding);
        for (std::size_t k = 0; k < inline_v.size(); ++k) {
          ++compared;
          const auto& a = inline_v[k];
          const auto& b = trace_v.at(k);
          bool same = a.constraint_id == b.constraint_id && a.status == b.status &&
                      a.slack.has_value() == b.slack.has_value();
          if (same && a.slack) {
            const double d = std::abs(*a.slack - *b.slack);
            worst = std::max(worst, d);
            same = d <= kOracleSlackTol;
          }
          if (!same) ++mismatches;
        }
      }
    }
  }
  return {mismatches == 0, std::to_string(compared) + " verdicts, " + std::to_string(mismatches) +
                               " mismatches, max |dslack| " + fmt("%g", worst)};
}

Outcome determinism() {
  std::size_t files = 0;
  for (const char* which : {"baseline", "optimized"}) {
    const auto& reference = batch(which);
    for (const char* threads : {"1", "3"}) {
      const auto other = simulate(reference.fixture, std::string(which) + "-t" + threads, threads);
      for (const char* f : {"results.json", "trace.csv"}) {
        ++files;
        if (read_text_file(reference.dir / f) != read_text_file(other.dir / f))
          return {false, std::string(f) + " differs for " + which + " with " + threads +
                             " thread(s)"};
      }
    }
  }
  return {true, std::to_string(files) + " file pairs byte-identical across 1, 3, all threads"};
}

bool graph_matches(const oracle::Digraph& g, const std::vector<int>& listing) {
  const auto model = oracle::to_model(g, listing);
  std::set<std::pair<std::string, std::vector<std::string>>> got;
  for (const auto& f : validate_model(model)) got.insert({f.rule, f.subjects});
  const auto expected = oracle::expected_graph_findings(g);
  if (got != expected) return false;
  if (!expected.empty()) return true;
  const auto order = oracle::smallest_topological_order(g);
  return order && topological_order(model) == *order;
}

Outcome properties() {
  std::size_t graphs = 0, graph_failures = 0;
  auto check = [&](const std::vector<int>& listing) {
    return [&, listing](const oracle::Digraph& g) {
      ++graphs;
      if (!graph_matches(g, listing)) ++graph_failures;
    };
  };
  for (int n = 1; n <= 5; ++n) oracle::for_each_digraph(n, n <= 3, check(oracle::scrambled_listing(n)));
  oracle::for_each_dag_shape(6, true, check(oracle::scrambled_listing(6)));

  std::mt19937_64 rng(1009);
  std::uniform_real_distribution<double> a_dist(2.0, 10.0), tr_dist(0.0, 1.5);
  double worst = 0.0;
  for (int i = 0; i < kIntegrationDraws; ++i) {
    const double a = a_dist(rng), tr = tr_dist(rng);
    const double v = std::uniform_real_distribution<double>(0.5 * a * tr, 40.0)(rng);
    const aeb::BrakeParams p{a, tr};
    const double t = std::uniform_real_distribution<double>(0.0, 1.1 * aeb::stopping_time(v, p))(rng);
    const auto exact = aeb::deceleration_profile(t, p, v);
    const auto numeric = oracle::integrate_braking(v, a, tr, t);
    worst = std::max({worst, std::abs(exact.distance_traveled - numeric.distance),
                      std::abs(exact.v - numeric.v)});
  }
  return {graph_failures == 0 && worst <= kIntegrationTol,
          std::to_string(graphs) + " models, " + std::to_string(graph_failures) +
              " mismatches; max integration error " + fmt("%.3g", worst)};
}

Outcome analytic_soundness() {
  const auto doc = load_traceability(data("aeb_traceability.json"));
  const auto& map = doc.refinements.at(0);
  const double budget_worst =
      analysis::analytic_end_to_end(map, analysis::budget_latency_table(map)).worst_case;
  bool ok = true;
  std::string detail = "budget bound " + fmt("%.1f", budget_worst * 1e3) + " ms";
  for (const char* which : {"baseline", "optimized"}) {
    const auto& b = batch(which);
    const double observed = b.results["summary"]["max_pipeline_latency"];
    const auto scenario = sim::load_scenario(data(b.fixture));
    const double scenario_worst =
        analysis::analytic_end_to_end(map, analysis::latency_table(scenario.latencies)).worst_case;
    ok = ok && budget_worst >= observed && scenario_worst >= observed;
    detail += std::string("; ") + which + " observed " + fmt("%.3f", observed * 1e3) +
              " ms <= scenario bound " + fmt("%.1f", scenario_worst * 1e3) + " ms";
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"physics exactness", physics},
      {"sensor model", sensor},
      {"budget consistency", budgets},
      {"baseline compliance", baseline_result},
      {"optimized compliance", optimized_result},
      {"collision safety", collision_safety},
      {"oracle equivalence", oracle_equivalence},
      {"determinism", determinism},
      {"property suites", properties},
      {"analytic soundness", analytic_soundness},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("criterion %2zu %s  %-22s %s [%.2f s]\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
