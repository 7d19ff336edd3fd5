#ifndef ECSIM_TRACEABILITY_HPP
#define ECSIM_TRACEABILITY_HPP

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecsim/model.hpp"

namespace ecsim {

// Formalization stages, in derivation order.
enum class Stage {
  kDigitizedParagraph,
  kLegalLanguage,
  kTechnicalLanguage,
  kEventChainRequirement,
};

std::string_view to_string(Stage stage);
std::optional<Stage> parse_stage(std::string_view text);

struct RequirementNode {
  std::string id;
  Stage stage = Stage::kDigitizedParagraph;
  std::string text;
  std::optional<std::string> derived_from;
  std::optional<std::string> model_ref;       // EventChainRequirement only
  std::vector<std::string> constraint_refs;   // EventChainRequirement only
};

// Checks the derive links between requirement nodes. Each node has at most one
// parent, which must sit exactly one stage earlier. Rules reported:
//   duplicate-requirement-id, dangling-derive, stage-adjacency, orphan,
//   model-required, model-ref-stage, unknown-model, constraint-refs-stage,
//   unknown-constraint.
// Models referenced by event-chain requirements are looked up in `models`.
ValidationReport validate_trace_chain(std::span<const RequirementNode> nodes,
                                      std::span<const EventChainModel> models);

struct StepRefinement {
  std::string black_step;
  std::vector<std::string> white_steps;  // ordered along the causal chain
};

// A budget declared between two white-box steps. `function` names the
// white-box function whose latency the segment covers (f_DA, f_OD, ...).
struct BudgetSegment {
  std::string id;
  std::string from_step;
  std::string to_step;
  double budget_seconds = 0.0;
  std::string function;
};

struct RefinementMap {
  std::string id;
  std::string black_model;
  std::string white_model;
  std::vector<StepRefinement> step_map;
  std::vector<BudgetSegment> budgets;

  const StepRefinement* image_of(std::string_view black_step) const;
};

// Rules reported: unknown-black-step, duplicate-mapping, total-mapping,
// empty-image, unknown-white-step, chain-connectivity, causal-preservation.
// Throws InvalidModelError for invalid models and std::invalid_argument when
// the models do not match the map's declared roles and viewpoints.
ValidationReport check_refinement(const RefinementMap& map,
                                  const EventChainModel& black,
                                  const EventChainModel& white);

struct BudgetReport {
  std::string map_id;
  std::string constraint_id;
  std::chrono::nanoseconds sum{0};
  std::chrono::nanoseconds bound{0};
  double sum_seconds = 0.0;
  double bound_seconds = 0.0;
  double slack_seconds = 0.0;
  bool satisfied = false;
  std::vector<BudgetSegment> per_segment;
  // Set when the alternative could not be evaluated (compare_budget_alternatives).
  std::optional<std::string> error;
};

// Worst-case budget sum along the refined path of `end_to_end`, which must be
// a Max-direction constraint between two black-box steps. Budgets are summed in
// integer nanoseconds so that decimal budgets add up exactly; the comparison
// against the bound is inclusive.
// Throws std::invalid_argument for Min-direction or periodicity constraints,
// for unmapped endpoints, and for budget segments off the refined path.
BudgetReport check_budgeting(const RefinementMap& map,
                             const TimingConstraint& end_to_end,
                             const EventChainModel& black,
                             const EventChainModel& white);

// Evaluates every alternative and ranks them by ascending budget sum (ties by
// map id). Alternatives that fail check_refinement or check_budgeting come last
// with `error` set and satisfied = false.
std::vector<BudgetReport> compare_budget_alternatives(
    std::span<const RefinementMap> maps, const TimingConstraint& end_to_end,
    const EventChainModel& black, std::span<const EventChainModel> white_models);

std::chrono::nanoseconds to_nanoseconds(double seconds);

}  // namespace ecsim

#endif  // ECSIM_TRACEABILITY_HPP
