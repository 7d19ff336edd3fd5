#ifndef ECSIM_TRACEABILITY_IO_HPP
#define ECSIM_TRACEABILITY_IO_HPP

#include <filesystem>
#include <vector>

#include "ecsim/model_io.hpp"
#include "ecsim/traceability.hpp"

namespace ecsim {

// An end-to-end requirement on a black-box model that refinements must budget.
struct EndToEndRequirement {
  std::string model;
  TimingConstraint constraint;
};

// Schema:
//   { "models": [ "relative/path.json" | {inline model}, ... ],
//     "requirements": [ {id, stage, text, derived_from?, model_ref?,
//                        constraint_refs?} ],
//     "refinements": [ {id, black_model, white_model,
//                       step_map: {black_step: [white_steps]},
//                       budgets: [ {id, from, to, budget_s, function} ]} ],
//     "end_to_end": [ {model, id, kind, from, to, bound_s, direction} ] }
struct TraceabilityDocument {
  std::vector<EventChainModel> models;
  std::vector<RequirementNode> requirements;
  std::vector<RefinementMap> refinements;
  std::vector<EndToEndRequirement> end_to_end;
  ValidationReport schema_findings;

  const EventChainModel* find_model(std::string_view id) const;
};

// Relative model paths are resolved against `base_dir`.
TraceabilityDocument traceability_from_json(const nlohmann::json& doc,
                                            const std::filesystem::path& base_dir);
TraceabilityDocument load_traceability(const std::filesystem::path& path);

RefinementMap refinement_from_json(const nlohmann::json& doc,
                                   std::string_view where);

bool looks_like_traceability(const nlohmann::json& doc);

}  // namespace ecsim

#endif  // ECSIM_TRACEABILITY_IO_HPP
