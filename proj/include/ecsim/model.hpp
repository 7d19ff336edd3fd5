#ifndef ECSIM_MODEL_HPP
#define ECSIM_MODEL_HPP

#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ecsim {

enum class Viewpoint { kBlackBox, kWhiteBox };

enum class ConstraintKind { kLatency, kSynchronization, kPeriodicity, kDataAge };

// Max: the measured interval must not exceed the bound. Min: it must reach it.
enum class Direction { kMax, kMin };

struct EventChainStep {
  std::string id;
  std::string name;
  std::vector<std::string> depends_on;
  Viewpoint viewpoint = Viewpoint::kBlackBox;
};

// Synchronization and DataAge share the two-event slack semantics of Latency.
// The distinction is kept for reporting only.
struct TimingConstraint {
  std::string id;
  ConstraintKind kind = ConstraintKind::kLatency;
  std::string from_step;
  std::string to_step;
  double bound_seconds = 0.0;
  Direction direction = Direction::kMax;
};

struct EventChainModel {
  std::string id;
  std::string name;
  Viewpoint viewpoint = Viewpoint::kBlackBox;
  std::vector<EventChainStep> steps;
  std::vector<TimingConstraint> constraints;

  const EventChainStep* find_step(std::string_view step_id) const;
  const TimingConstraint* find_constraint(std::string_view constraint_id) const;
};

// One violated rule. `subjects` holds the offending step, constraint or
// requirement ids, sorted ascending.
struct Finding {
  std::string rule;
  std::vector<std::string> subjects;
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
};

using ValidationReport = std::vector<Finding>;

// Thrown by operations whose precondition is a structurally valid model.
class InvalidModelError : public std::exception {
 public:
  InvalidModelError(std::string model_id, ValidationReport report);
  const char* what() const noexcept override { return message_.c_str(); }
  const ValidationReport& report() const { return report_; }

 private:
  std::string message_;
  ValidationReport report_;
};

// Checks every structural invariant of an event-chain model. Rules reported:
//   duplicate-step-id, unknown-dependency, acyclic, unique-start-event,
//   start-reachability, viewpoint-mismatch, duplicate-constraint-id,
//   unknown-constraint-step, negative-bound, self-reference.
// An empty report means the model is valid. Findings come out in a
// deterministic order (by rule, then subjects).
ValidationReport validate_model(const EventChainModel& model);

// Kahn's algorithm with a min-heap: ties broken by ascending step id.
// Throws InvalidModelError when validate_model reports anything.
std::vector<std::string> topological_order(const EventChainModel& model);

// Signed slack of one observation. Max: bound - (t_to - t_from);
// Min: (t_to - t_from) - bound. Throws std::invalid_argument for Periodicity
// constraints and non-finite timestamps.
double constraint_slack(const TimingConstraint& constraint, double t_from,
                        double t_to);

// Boundary-inclusive.
inline bool is_satisfied(double slack) { return slack >= 0.0; }

std::string_view to_string(Viewpoint viewpoint);
std::string_view to_string(ConstraintKind kind);
std::string_view to_string(Direction direction);
std::optional<Viewpoint> parse_viewpoint(std::string_view text);
std::optional<ConstraintKind> parse_constraint_kind(std::string_view text);
std::optional<Direction> parse_direction(std::string_view text);

std::string format_finding(const Finding& finding);

}  // namespace ecsim

#endif  // ECSIM_MODEL_HPP
