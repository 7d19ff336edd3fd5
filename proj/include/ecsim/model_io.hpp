#ifndef ECSIM_MODEL_IO_HPP
#define ECSIM_MODEL_IO_HPP

#include <filesystem>

#include "ecsim/json_io.hpp"
#include "ecsim/model.hpp"

namespace ecsim {

// A parsed model plus schema findings (rule "unknown-key") that do not stop
// parsing. Wrong types and missing keys throw InputError instead.
struct LoadedModel {
  EventChainModel model;
  ValidationReport schema_findings;
};

// Schema:
//   { "id", "name", "viewpoint": "black_box"|"white_box",
//     "steps": [ {"id", "name", "depends_on": [ids]} ],
//     "constraints": [ {"id", "kind", "from", "to", "bound_s", "direction"} ] }
// kind: latency|synchronization|periodicity|data_age; direction: max|min.
LoadedModel model_from_json(const nlohmann::json& doc);
nlohmann::json model_to_json(const EventChainModel& model);
LoadedModel load_model(const std::filesystem::path& path);

TimingConstraint constraint_from_json(const nlohmann::json& doc,
                                      std::string_view where,
                                      ValidationReport* findings);
nlohmann::json constraint_to_json(const TimingConstraint& constraint);

}  // namespace ecsim

#endif  // ECSIM_MODEL_IO_HPP
