#ifndef ECSIM_ANALYSIS_HPP
#define ECSIM_ANALYSIS_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecsim/latency.hpp"
#include "ecsim/model.hpp"
#include "ecsim/sim.hpp"
#include "ecsim/traceability.hpp"

namespace ecsim::analysis {

enum class Verdict { kSatisfied, kViolated, kNotObservable };

std::string_view to_string(Verdict verdict);

struct TraceEvent {
  double time = 0.0;
  std::string name;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct EventTrace {
  std::string run_id;
  std::vector<TraceEvent> events;  // nondecreasing in time

  friend bool operator==(const EventTrace&, const EventTrace&) = default;
};

struct EvaluationResult {
  std::string constraint_id;
  std::string run_id;
  Verdict status = Verdict::kNotObservable;
  std::optional<double> slack;     // present iff status != kNotObservable
  std::optional<double> measured;  // interval (or worst jitter for periodicity)
  std::string note;                // why a result is not observable
};

// Model step id -> event name.
using Binding = std::map<std::string, std::string>;

// Throws std::invalid_argument when the binding names a step the model lacks
// or leaves a step used by a constraint unbound.
void check_binding(const EventChainModel& model, const Binding& binding);

// Pairs the first from-occurrence with the first to-occurrence at or after it.
// Several from-occurrences on a Latency constraint are not paired at all
// (note "multiple-activations").
EvaluationResult evaluate_pair(const TimingConstraint& constraint,
                               std::string_view run_id,
                               std::span<const double> from_times,
                               std::span<const double> to_times);

inline constexpr double kDefaultJitterFraction = 0.01;

// Worst absolute deviation of successive gaps from the bound. Tolerance
// defaults to kDefaultJitterFraction * bound. Fewer than three occurrences are
// not observable.
EvaluationResult evaluate_periodicity(const TimingConstraint& constraint,
                                      const EventTrace& trace,
                                      const Binding& binding,
                                      std::optional<double> jitter_tolerance = {});

// One result per model constraint, in model order.
std::vector<EvaluationResult> evaluate_trace(const EventChainModel& model,
                                             const EventTrace& trace,
                                             const Binding& binding);

// Same evaluation driven by the record fields instead of an event list.
// Binding values must be simulator event names.
std::vector<EvaluationResult> evaluate_record(const EventChainModel& model,
                                              const sim::RunRecord& record,
                                              const Binding& binding);

struct AnalyticBound {
  double worst_case = 0.0;
  double best_case = 0.0;
};

using FunctionLatencies = std::map<std::string, LatencySpec>;

// Sums latency maxima and minima over the map's budget segments, in integer
// nanoseconds. Throws std::invalid_argument when a segment's function has no
// LatencySpec.
AnalyticBound analytic_end_to_end(const RefinementMap& map,
                                  const FunctionLatencies& latencies);

// Uniform(budget / 2, budget) for every budgeted function of `map`.
FunctionLatencies budget_latency_table(const RefinementMap& map);
FunctionLatencies latency_table(const sim::LatencyTable& table);

enum class Metric {
  kWarningLead,  // t2 - t1
  kTAcq,
  kTDet,
  kTTrj,
  kTCol,
  kStopMargin,   // min_distance
  kT2MinusT0,
};

std::string_view metric_name(Metric metric);
std::optional<Metric> parse_metric(std::string_view name);
std::optional<double> metric_value(const sim::RunRecord& record, Metric metric);

struct HistogramSummary {
  std::string metric;
  std::vector<double> edges;  // bins + 1
  std::vector<std::size_t> counts;
  std::size_t observable = 0;
  std::size_t unobservable = 0;
  std::size_t violations = 0;
  double violation_fraction = 0.0;
  double p1 = 0.0;
  double p50 = 0.0;
  double p99 = 0.0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::optional<double> bound;
};

// Equal-width bins over [min, max] of the observed values. A value violates
// when constraint_slack(constraint, 0, value) < 0.
// Throws std::invalid_argument when no run carries the metric, bins == 0, or
// the constraint is a periodicity constraint.
HistogramSummary summarize(std::span<const sim::RunRecord> batch, Metric metric,
                           const TimingConstraint& constraint,
                           std::size_t bins = 40);

// Linear interpolation between closest ranks; `sorted` must be ascending and
// nonempty, q in [0, 1].
double quantile(std::span<const double> sorted, double q);

std::string histogram_csv(const HistogramSummary& summary);
std::string histogram_svg(const HistogramSummary& summary);

// CSV with header "run,time_s,event"; times printed with 17 significant digits.
std::string write_trace_csv(std::span<const sim::RunRecord> records);
// Groups rows by run in order of first appearance. Throws InputError (with the
// line number) on malformed rows or decreasing times within a run.
std::vector<EventTrace> parse_trace_csv(std::string_view text,
                                        std::string_view origin = "trace");

EventTrace to_trace(const sim::RunRecord& record);

}  // namespace ecsim::analysis

#endif  // ECSIM_ANALYSIS_HPP
