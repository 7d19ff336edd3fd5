#include "ecsim/model_io.hpp"

namespace ecsim {

using namespace json_detail;

namespace {

void note_unknown_keys(const nlohmann::json& object, std::string_view where,
                       std::initializer_list<std::string_view> allowed,
                       ValidationReport* findings) {
  for (const auto& key : unknown_keys(object, allowed)) {
    if (findings == nullptr) {
      throw InputError(std::string(where) + ": unknown key '" + key + "'");
    }
    findings->push_back(Finding{"unknown-key", {std::string(where) + "." + key},
                                "unknown key '" + key + "' in " +
                                    std::string(where)});
  }
}

}  // namespace

TimingConstraint constraint_from_json(const nlohmann::json& doc,
                                      std::string_view where_view,
                                      ValidationReport* findings) {
  const std::string where(where_view);
  expect_object(doc, where);
  note_unknown_keys(doc, where,
                    {"id", "kind", "from", "to", "bound_s", "direction"},
                    findings);
  TimingConstraint c;
  c.id = as_string(require(doc, "id", where), where + ".id");
  const auto kind = as_string(require(doc, "kind", where), where + ".kind");
  if (auto parsed = parse_constraint_kind(kind)) {
    c.kind = *parsed;
  } else {
    throw InputError(where + ".kind: unknown constraint kind '" + kind + "'");
  }
  c.from_step = as_string(require(doc, "from", where), where + ".from");
  c.to_step = as_string(require(doc, "to", where), where + ".to");
  c.bound_seconds = as_number(require(doc, "bound_s", where), where + ".bound_s");
  const auto direction =
      as_string(require(doc, "direction", where), where + ".direction");
  if (auto parsed = parse_direction(direction)) {
    c.direction = *parsed;
  } else {
    throw InputError(where + ".direction: expected 'max' or 'min'");
  }
  return c;
}

nlohmann::json constraint_to_json(const TimingConstraint& c) {
  return {{"id", c.id},
          {"kind", std::string(to_string(c.kind))},
          {"from", c.from_step},
          {"to", c.to_step},
          {"bound_s", c.bound_seconds},
          {"direction", std::string(to_string(c.direction))}};
}

LoadedModel model_from_json(const nlohmann::json& doc) {
  LoadedModel out;
  auto& model = out.model;
  expect_object(doc, "model");
  note_unknown_keys(doc, "model",
                    {"id", "name", "viewpoint", "steps", "constraints"},
                    &out.schema_findings);
  model.id = as_string(require(doc, "id", "model"), "model.id");
  model.name = as_string(require(doc, "name", "model"), "model.name");
  const auto viewpoint =
      as_string(require(doc, "viewpoint", "model"), "model.viewpoint");
  if (auto parsed = parse_viewpoint(viewpoint)) {
    model.viewpoint = *parsed;
  } else {
    throw InputError("model.viewpoint: expected 'black_box' or 'white_box'");
  }

  const auto& steps = require(doc, "steps", "model");
  expect_array(steps, "model.steps");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string where = "steps[" + std::to_string(i) + "]";
    const auto& item = steps[i];
    expect_object(item, where);
    note_unknown_keys(item, where, {"id", "name", "depends_on"},
                      &out.schema_findings);
    EventChainStep step;
    step.id = as_string(require(item, "id", where), where + ".id");
    step.name = item.contains("name")
                    ? as_string(item["name"], where + ".name")
                    : step.id;
    if (item.contains("depends_on")) {
      step.depends_on = as_string_list(item["depends_on"], where + ".depends_on");
    }
    step.viewpoint = model.viewpoint;
    model.steps.push_back(std::move(step));
  }

  if (doc.contains("constraints")) {
    const auto& constraints = doc["constraints"];
    expect_array(constraints, "model.constraints");
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      model.constraints.push_back(constraint_from_json(
          constraints[i], "constraints[" + std::to_string(i) + "]",
          &out.schema_findings));
    }
  }
  return out;
}

nlohmann::json model_to_json(const EventChainModel& model) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& step : model.steps) {
    steps.push_back({{"id", step.id},
                     {"name", step.name},
                     {"depends_on", step.depends_on}});
  }
  nlohmann::json constraints = nlohmann::json::array();
  for (const auto& c : model.constraints) constraints.push_back(constraint_to_json(c));
  return {{"id", model.id},
          {"name", model.name},
          {"viewpoint", std::string(to_string(model.viewpoint))},
          {"steps", std::move(steps)},
          {"constraints", std::move(constraints)}};
}

LoadedModel load_model(const std::filesystem::path& path) {
  try {
    return model_from_json(read_json_file(path));
  } catch (const InputError& e) {
    const std::string what = e.what();
    if (what.rfind(path.string(), 0) == 0) throw;
    throw InputError(path.string() + ": " + what);
  }
}

}  // namespace ecsim
