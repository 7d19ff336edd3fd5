#include "ecsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace ecsim {

namespace {

Finding make_finding(std::string rule, std::vector<std::string> subjects,
                     std::string message) {
  std::sort(subjects.begin(), subjects.end());
  return Finding{std::move(rule), std::move(subjects), std::move(message)};
}

// Dependency graph over the steps with a unique id; edges point from a step to
// the steps it depends on.
struct DependencyGraph {
  std::vector<std::string> ids;
  std::vector<std::vector<std::size_t>> deps;
};

DependencyGraph build_graph(const EventChainModel& model) {
  DependencyGraph graph;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& step : model.steps) {
    if (index.emplace(step.id, graph.ids.size()).second) {
      graph.ids.push_back(step.id);
      graph.deps.emplace_back();
    }
  }
  std::vector<bool> seen(graph.ids.size(), false);
  for (const auto& step : model.steps) {
    const std::size_t from = index.at(step.id);
    if (seen[from]) continue;  // duplicate id, first definition wins
    seen[from] = true;
    for (const auto& dep : step.depends_on) {
      auto it = index.find(dep);
      if (it == index.end()) continue;
      auto& list = graph.deps[from];
      if (std::find(list.begin(), list.end(), it->second) == list.end()) {
        list.push_back(it->second);
      }
    }
  }
  return graph;
}

// Tarjan's strongly connected components; returns the components that form a
// cycle (more than one node, or a self-dependency).
std::vector<std::vector<std::size_t>> cyclic_components(
    const DependencyGraph& graph) {
  const std::size_t n = graph.ids.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> order(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> cycles;
  std::size_t counter = 0;

  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    order[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : graph.deps[v]) {
      if (order[w] == kUnvisited) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], order[w]);
      }
    }
    if (low[v] != order[v]) return;
    std::vector<std::size_t> component;
    std::size_t w = 0;
    do {
      w = stack.back();
      stack.pop_back();
      on_stack[w] = false;
      component.push_back(w);
    } while (w != v);
    const bool self_loop =
        std::find(graph.deps[v].begin(), graph.deps[v].end(), v) !=
        graph.deps[v].end();
    if (component.size() > 1 || self_loop) cycles.push_back(std::move(component));
  };

  for (std::size_t v = 0; v < n; ++v) {
    if (order[v] == kUnvisited) visit(v);
  }
  return cycles;
}

}  // namespace

const EventChainStep* EventChainModel::find_step(std::string_view step_id) const {
  for (const auto& step : steps) {
    if (step.id == step_id) return &step;
  }
  return nullptr;
}

const TimingConstraint* EventChainModel::find_constraint(
    std::string_view constraint_id) const {
  for (const auto& c : constraints) {
    if (c.id == constraint_id) return &c;
  }
  return nullptr;
}

InvalidModelError::InvalidModelError(std::string model_id,
                                     ValidationReport report)
    : report_(std::move(report)) {
  std::ostringstream out;
  out << "model '" << model_id << "' is invalid (" << report_.size()
      << " finding" << (report_.size() == 1 ? "" : "s") << ")";
  if (!report_.empty()) out << ": " << format_finding(report_.front());
  message_ = out.str();
}

ValidationReport validate_model(const EventChainModel& model) {
  ValidationReport report;

  std::map<std::string, int> id_count;
  for (const auto& step : model.steps) ++id_count[step.id];
  for (const auto& [id, count] : id_count) {
    if (count > 1) {
      report.push_back(make_finding("duplicate-step-id", {id},
                                    "step id '" + id + "' defined " +
                                        std::to_string(count) + " times"));
    }
  }

  for (const auto& step : model.steps) {
    for (const auto& dep : step.depends_on) {
      if (!id_count.contains(dep)) {
        report.push_back(make_finding(
            "unknown-dependency", {step.id, dep},
            "step '" + step.id + "' depends on unknown step '" + dep + "'"));
      }
    }
    if (step.viewpoint != model.viewpoint) {
      report.push_back(make_finding(
          "viewpoint-mismatch", {step.id},
          "step '" + step.id + "' viewpoint differs from the model viewpoint"));
    }
  }

  const DependencyGraph graph = build_graph(model);
  for (const auto& component : cyclic_components(graph)) {
    std::vector<std::string> ids;
    for (std::size_t v : component) ids.push_back(graph.ids[v]);
    std::sort(ids.begin(), ids.end());
    std::string joined;
    for (const auto& id : ids) joined += (joined.empty() ? "" : ", ") + id;
    report.push_back(make_finding("acyclic", std::move(ids),
                                  "dependency cycle through {" + joined + "}"));
  }

  std::vector<std::size_t> starts;
  for (std::size_t v = 0; v < graph.ids.size(); ++v) {
    const auto* step = model.find_step(graph.ids[v]);
    if (step->depends_on.empty()) starts.push_back(v);
  }
  if (starts.size() != 1) {
    std::vector<std::string> ids;
    for (std::size_t v : starts) ids.push_back(graph.ids[v]);
    report.push_back(make_finding(
        "unique-start-event", std::move(ids),
        "expected exactly one step without dependencies, found " +
            std::to_string(starts.size())));
  } else {
    // Breadth-first over dependents: every step reached this way depends
    // (transitively) on the start event.
    const std::size_t start = starts.front();
    const std::size_t n = graph.ids.size();
    std::vector<std::vector<std::size_t>> dependents(n);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t w : graph.deps[v]) dependents[w].push_back(v);
    }
    std::vector<bool> reached(n, false);
    std::vector<std::size_t> queue{start};
    reached[start] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (std::size_t v : dependents[queue[head]]) {
        if (!reached[v]) {
          reached[v] = true;
          queue.push_back(v);
        }
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (!reached[v]) {
        report.push_back(make_finding(
            "start-reachability", {graph.ids[v]},
            "step '" + graph.ids[v] + "' does not depend on start event '" +
                graph.ids[start] + "'"));
      }
    }
  }

  std::map<std::string, int> constraint_count;
  for (const auto& c : model.constraints) ++constraint_count[c.id];
  for (const auto& [id, count] : constraint_count) {
    if (count > 1) {
      report.push_back(make_finding("duplicate-constraint-id", {id},
                                    "constraint id '" + id + "' defined " +
                                        std::to_string(count) + " times"));
    }
  }
  for (const auto& c : model.constraints) {
    for (const auto* step : {&c.from_step, &c.to_step}) {
      if (!id_count.contains(*step)) {
        report.push_back(make_finding(
            "unknown-constraint-step", {c.id, *step},
            "constraint '" + c.id + "' references unknown step '" + *step +
                "'"));
      }
      if (c.from_step == c.to_step) break;
    }
    if (!(c.bound_seconds >= 0.0) || !std::isfinite(c.bound_seconds)) {
      report.push_back(make_finding(
          "negative-bound", {c.id},
          "constraint '" + c.id + "' bound must be finite and >= 0"));
    }
    if (c.kind != ConstraintKind::kPeriodicity && c.from_step == c.to_step) {
      report.push_back(make_finding(
          "self-reference", {c.id},
          "constraint '" + c.id +
              "' must reference two distinct steps (only periodicity may "
              "reference one)"));
    }
  }

  std::sort(report.begin(), report.end(), [](const Finding& a, const Finding& b) {
    return std::tie(a.rule, a.subjects, a.message) <
           std::tie(b.rule, b.subjects, b.message);
  });
  return report;
}

std::vector<std::string> topological_order(const EventChainModel& model) {
  if (auto report = validate_model(model); !report.empty()) {
    throw InvalidModelError(model.id, std::move(report));
  }
  const DependencyGraph graph = build_graph(model);
  const std::size_t n = graph.ids.size();
  std::vector<std::size_t> pending(n, 0);
  std::vector<std::vector<std::size_t>> dependents(n);
  for (std::size_t v = 0; v < n; ++v) {
    pending[v] = graph.deps[v].size();
    for (std::size_t w : graph.deps[v]) dependents[w].push_back(v);
  }

  auto by_id = [&](std::size_t a, std::size_t b) {
    return graph.ids[a] > graph.ids[b];
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_id)>
      ready(by_id);
  for (std::size_t v = 0; v < n; ++v) {
    if (pending[v] == 0) ready.push(v);
  }

  std::vector<std::string> order;
  order.reserve(n);
  while (!ready.empty()) {
    const std::size_t v = ready.top();
    ready.pop();
    order.push_back(graph.ids[v]);
    for (std::size_t w : dependents[v]) {
      if (--pending[w] == 0) ready.push(w);
    }
  }
  return order;
}

double constraint_slack(const TimingConstraint& constraint, double t_from,
                        double t_to) {
  if (constraint.kind == ConstraintKind::kPeriodicity) {
    throw std::invalid_argument("constraint '" + constraint.id +
                                "': periodicity has no two-event slack");
  }
  if (!std::isfinite(t_from) || !std::isfinite(t_to)) {
    throw std::invalid_argument("constraint '" + constraint.id +
                                "': timestamps must be finite");
  }
  const double measured = t_to - t_from;
  return constraint.direction == Direction::kMax
             ? constraint.bound_seconds - measured
             : measured - constraint.bound_seconds;
}

std::string_view to_string(Viewpoint viewpoint) {
  return viewpoint == Viewpoint::kBlackBox ? "black_box" : "white_box";
}

std::string_view to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::kLatency:
      return "latency";
    case ConstraintKind::kSynchronization:
      return "synchronization";
    case ConstraintKind::kPeriodicity:
      return "periodicity";
    case ConstraintKind::kDataAge:
      return "data_age";
  }
  return "latency";
}

std::string_view to_string(Direction direction) {
  return direction == Direction::kMax ? "max" : "min";
}

std::optional<Viewpoint> parse_viewpoint(std::string_view text) {
  if (text == "black_box") return Viewpoint::kBlackBox;
  if (text == "white_box") return Viewpoint::kWhiteBox;
  return std::nullopt;
}

std::optional<ConstraintKind> parse_constraint_kind(std::string_view text) {
  for (auto kind : {ConstraintKind::kLatency, ConstraintKind::kSynchronization,
                    ConstraintKind::kPeriodicity, ConstraintKind::kDataAge}) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

std::optional<Direction> parse_direction(std::string_view text) {
  if (text == "max") return Direction::kMax;
  if (text == "min") return Direction::kMin;
  return std::nullopt;
}

std::string format_finding(const Finding& finding) {
  std::string out = "rule=" + finding.rule + " subjects=[";
  for (std::size_t i = 0; i < finding.subjects.size(); ++i) {
    out += (i ? "," : "") + finding.subjects[i];
  }
  out += "] " + finding.message;
  return out;
}

}  // namespace ecsim
