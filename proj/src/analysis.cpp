#include "ecsim/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ecsim::analysis {

namespace {

constexpr std::array<std::string_view, 7> kMetricNames = {
    "warning_lead", "t_acq", "t_det", "t_trj", "t_col", "stop_margin", "t2_minus_t0"};

EvaluationResult not_observable(const TimingConstraint& c, std::string_view run_id,
                                std::string note) {
  return {c.id, std::string(run_id), Verdict::kNotObservable, std::nullopt,
          std::nullopt, std::move(note)};
}

EvaluationResult periodicity_from_times(const TimingConstraint& c,
                                        std::string_view run_id,
                                        std::span<const double> times,
                                        std::optional<double> jitter_tolerance) {
  if (c.kind != ConstraintKind::kPeriodicity) {
    throw std::invalid_argument("constraint " + c.id + " is not a periodicity constraint");
  }
  if (times.size() < 3) return not_observable(c, run_id, "insufficient-occurrences");
  const double tolerance = jitter_tolerance.value_or(kDefaultJitterFraction * c.bound_seconds);
  double worst = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    worst = std::max(worst, std::abs((times[i] - times[i - 1]) - c.bound_seconds));
  }
  const double slack = tolerance - worst;
  return {c.id, std::string(run_id),
          is_satisfied(slack) ? Verdict::kSatisfied : Verdict::kViolated, slack, worst,
          ""};
}

std::vector<double> times_of(const EventTrace& trace, std::string_view event) {
  std::vector<double> out;
  for (const auto& e : trace.events) {
    if (e.name == event) out.push_back(e.time);
  }
  return out;
}

const std::string& bound_event(const Binding& binding, const std::string& step) {
  auto it = binding.find(step);
  if (it == binding.end()) throw std::invalid_argument("step " + step + " is not bound");
  return it->second;
}

sim::EventKind sim_event(const std::string& name) {
  auto kind = sim::parse_event_name(name);
  if (!kind) throw std::invalid_argument("unknown event name '" + name + "'");
  return *kind;
}

std::string format_double(const char* format, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, format, value);
  return buffer;
}

}  // namespace

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kSatisfied:
      return "satisfied";
    case Verdict::kViolated:
      return "violated";
    case Verdict::kNotObservable:
      return "not_observable";
  }
  return "not_observable";
}

void check_binding(const EventChainModel& model, const Binding& binding) {
  for (const auto& [step, event] : binding) {
    if (model.find_step(step) == nullptr) {
      throw std::invalid_argument("binding references unknown step " + step);
    }
    if (event.empty()) throw std::invalid_argument("step " + step + " bound to empty event");
  }
  for (const auto& c : model.constraints) {
    for (const auto* step : {&c.from_step, &c.to_step}) {
      if (!binding.contains(*step)) {
        throw std::invalid_argument("constraint " + c.id + " uses unbound step " + *step);
      }
    }
  }
}

EvaluationResult evaluate_pair(const TimingConstraint& c, std::string_view run_id,
                               std::span<const double> from_times,
                               std::span<const double> to_times) {
  if (c.kind == ConstraintKind::kPeriodicity) {
    throw std::invalid_argument("periodicity constraint " + c.id + " has no event pair");
  }
  if (from_times.empty()) return not_observable(c, run_id, "missing-from");
  if (c.kind == ConstraintKind::kLatency && from_times.size() > 1) {
    return not_observable(c, run_id, "multiple-activations");
  }
  const double from = from_times.front();
  auto to = std::find_if(to_times.begin(), to_times.end(),
                         [from](double t) { return t >= from; });
  if (to == to_times.end()) return not_observable(c, run_id, "missing-to");
  const double slack = constraint_slack(c, from, *to);
  return {c.id, std::string(run_id),
          is_satisfied(slack) ? Verdict::kSatisfied : Verdict::kViolated, slack,
          *to - from, ""};
}

EvaluationResult evaluate_periodicity(const TimingConstraint& constraint,
                                      const EventTrace& trace, const Binding& binding,
                                      std::optional<double> jitter_tolerance) {
  const auto times = times_of(trace, bound_event(binding, constraint.from_step));
  return periodicity_from_times(constraint, trace.run_id, times, jitter_tolerance);
}

std::vector<EvaluationResult> evaluate_trace(const EventChainModel& model,
                                             const EventTrace& trace,
                                             const Binding& binding) {
  check_binding(model, binding);
  std::vector<EvaluationResult> out;
  out.reserve(model.constraints.size());
  for (const auto& c : model.constraints) {
    if (c.kind == ConstraintKind::kPeriodicity) {
      out.push_back(evaluate_periodicity(c, trace, binding));
      continue;
    }
    const auto from = times_of(trace, bound_event(binding, c.from_step));
    const auto to = times_of(trace, bound_event(binding, c.to_step));
    out.push_back(evaluate_pair(c, trace.run_id, from, to));
  }
  return out;
}

std::vector<EvaluationResult> evaluate_record(const EventChainModel& model,
                                              const sim::RunRecord& record,
                                              const Binding& binding) {
  check_binding(model, binding);
  const std::string run_id = std::to_string(record.run_index);
  std::vector<EvaluationResult> out;
  out.reserve(model.constraints.size());
  for (const auto& c : model.constraints) {
    const auto from = record.occurrences(sim_event(bound_event(binding, c.from_step)));
    if (c.kind == ConstraintKind::kPeriodicity) {
      out.push_back(periodicity_from_times(c, run_id, from, std::nullopt));
      continue;
    }
    const auto to = record.occurrences(sim_event(bound_event(binding, c.to_step)));
    out.push_back(evaluate_pair(c, run_id, from, to));
  }
  return out;
}

AnalyticBound analytic_end_to_end(const RefinementMap& map,
                                  const FunctionLatencies& latencies) {
  std::chrono::nanoseconds worst{0};
  std::chrono::nanoseconds best{0};
  for (const auto& segment : map.budgets) {
    auto it = latencies.find(segment.function);
    if (it == latencies.end()) {
      throw std::invalid_argument("no latency specification for function '" +
                                  segment.function + "' (segment " + segment.id + ")");
    }
    worst += to_nanoseconds(it->second.max());
    best += to_nanoseconds(it->second.min());
  }
  using Seconds = std::chrono::duration<double>;
  return {std::chrono::duration_cast<Seconds>(worst).count(),
          std::chrono::duration_cast<Seconds>(best).count()};
}

FunctionLatencies budget_latency_table(const RefinementMap& map) {
  FunctionLatencies out;
  for (const auto& segment : map.budgets) {
    out[segment.function] =
        LatencySpec::uniform(0.5 * segment.budget_seconds, segment.budget_seconds);
  }
  return out;
}

FunctionLatencies latency_table(const sim::LatencyTable& table) {
  FunctionLatencies out;
  for (auto f : sim::kAllFunctions) out[std::string(sim::function_name(f))] = table[f];
  return out;
}

std::string_view metric_name(Metric metric) {
  return kMetricNames[static_cast<std::size_t>(metric)];
}

std::optional<Metric> parse_metric(std::string_view name) {
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
    if (kMetricNames[i] == name) return static_cast<Metric>(i);
  }
  return std::nullopt;
}

std::optional<double> metric_value(const sim::RunRecord& r, Metric metric) {
  switch (metric) {
    case Metric::kWarningLead:
      if (r.t1 && r.t2) return *r.t2 - *r.t1;
      return std::nullopt;
    case Metric::kTAcq:
      return r.t_acq;
    case Metric::kTDet:
      return r.t_det;
    case Metric::kTTrj:
      return r.t_trj;
    case Metric::kTCol:
      return r.t_col;
    case Metric::kStopMargin:
      return r.min_distance;
    case Metric::kT2MinusT0:
      if (r.t0 && r.t2) return *r.t2 - *r.t0;
      return std::nullopt;
  }
  return std::nullopt;
}

double quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level outside [0, 1]");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

HistogramSummary summarize(std::span<const sim::RunRecord> batch, Metric metric,
                           const TimingConstraint& constraint, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  if (constraint.kind == ConstraintKind::kPeriodicity) {
    throw std::invalid_argument("periodicity constraints do not apply to run metrics");
  }
  HistogramSummary out;
  out.metric = std::string(metric_name(metric));
  out.bound = constraint.bound_seconds;

  std::vector<double> values;
  values.reserve(batch.size());
  for (const auto& record : batch) {
    if (auto v = metric_value(record, metric)) {
      values.push_back(*v);
    } else {
      ++out.unobservable;
    }
  }
  if (values.empty()) {
    throw std::invalid_argument("no run carries metric " + out.metric);
  }
  // Sorting first makes every reduction below independent of batch order.
  std::sort(values.begin(), values.end());
  out.observable = values.size();
  out.min = values.front();
  out.max = values.back();

  double sum = 0.0;
  double compensation = 0.0;
  for (double v : values) {
    const double y = v - compensation;
    const double t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
    if (!is_satisfied(constraint_slack(constraint, 0.0, v))) ++out.violations;
  }
  out.mean = sum / static_cast<double>(values.size());
  out.violation_fraction =
      static_cast<double>(out.violations) / static_cast<double>(out.observable);
  out.p1 = quantile(values, 0.01);
  out.p50 = quantile(values, 0.50);
  out.p99 = quantile(values, 0.99);

  const double width = (out.max - out.min) / static_cast<double>(bins);
  out.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    out.edges[i] = out.min + width * static_cast<double>(i);
  }
  out.edges.back() = out.max;
  out.counts.assign(bins, 0);
  for (double v : values) {
    std::size_t index = 0;
    if (width > 0.0) {
      index = static_cast<std::size_t>((v - out.min) / width);
      index = std::min(index, bins - 1);
    }
    ++out.counts[index];
  }
  return out;
}

std::string histogram_csv(const HistogramSummary& s) {
  std::string out = "bin_low,bin_high,count\n";
  for (std::size_t i = 0; i < s.counts.size(); ++i) {
    out += format_double("%.17g", s.edges[i]) + "," +
           format_double("%.17g", s.edges[i + 1]) + "," + std::to_string(s.counts[i]) +
           "\n";
  }
  return out;
}

std::string histogram_svg(const HistogramSummary& s) {
  constexpr double kWidth = 640.0;
  constexpr double kHeight = 360.0;
  constexpr double kLeft = 60.0;
  constexpr double kRight = 20.0;
  constexpr double kTop = 40.0;
  constexpr double kBottom = 50.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const std::size_t peak =
      s.counts.empty() ? 0 : *std::max_element(s.counts.begin(), s.counts.end());
  const double span = s.max - s.min;
  auto x_of = [&](double value) {
    return span > 0.0 ? kLeft + (value - s.min) / span * plot_w : kLeft + plot_w / 2.0;
  };
  auto num = [](double v) { return format_double("%.6g", v); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"360\" "
         "viewBox=\"0 0 640 360\">\n";
  out += "<rect width=\"640\" height=\"360\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">" +
         s.metric + " (n=" + std::to_string(s.observable) +
         ", violations=" + num(100.0 * s.violation_fraction) + "%)</text>\n";
  const double bar_w = s.counts.empty() ? 0.0 : plot_w / static_cast<double>(s.counts.size());
  for (std::size_t i = 0; i < s.counts.size(); ++i) {
    if (s.counts[i] == 0) continue;
    const double h = plot_h * static_cast<double>(s.counts[i]) / static_cast<double>(peak);
    out += "<rect x=\"" + num(kLeft + bar_w * static_cast<double>(i)) + "\" y=\"" +
           num(kTop + plot_h - h) + "\" width=\"" + num(bar_w) + "\" height=\"" + num(h) +
           "\" fill=\"#4a78b5\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
  }
  const double axis_y = kTop + plot_h;
  out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(axis_y) + "\" x2=\"" +
         num(kLeft + plot_w) + "\" y2=\"" + num(axis_y) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) +
         "\" y2=\"" + num(axis_y) + "\" stroke=\"black\"/>\n";
  out += "<text x=\"" + num(kLeft) + "\" y=\"" + num(axis_y + 18) +
         "\" text-anchor=\"start\" font-family=\"sans-serif\" font-size=\"11\">" +
         num(s.min) + " s</text>\n";
  out += "<text x=\"" + num(kLeft + plot_w) + "\" y=\"" + num(axis_y + 18) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
         num(s.max) + " s</text>\n";
  out += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(kTop + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
         std::to_string(peak) + "</text>\n";
  if (s.bound && *s.bound >= s.min && *s.bound <= s.max) {
    const double x = x_of(*s.bound);
    out += "<line x1=\"" + num(x) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(x) +
           "\" y2=\"" + num(axis_y) +
           "\" stroke=\"#c0392b\" stroke-dasharray=\"4 3\"/>\n";
    out += "<text x=\"" + num(x) + "\" y=\"" + num(axis_y + 34) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" "
           "fill=\"#c0392b\">bound " +
           num(*s.bound) + " s</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace ecsim::analysis
