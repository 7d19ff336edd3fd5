#include "ecsim/traceability_io.hpp"

namespace ecsim {

using namespace json_detail;

namespace {

void note_unknown(const nlohmann::json& object, std::string_view where,
                  std::initializer_list<std::string_view> allowed,
                  ValidationReport& findings) {
  for (const auto& key : unknown_keys(object, allowed)) {
    findings.push_back(Finding{"unknown-key", {std::string(where) + "." + key},
                               "unknown key '" + key + "' in " +
                                   std::string(where)});
  }
}

RequirementNode requirement_from_json(const nlohmann::json& doc,
                                      const std::string& where,
                                      ValidationReport& findings) {
  expect_object(doc, where);
  note_unknown(doc, where,
               {"id", "stage", "text", "derived_from", "model_ref",
                "constraint_refs"},
               findings);
  RequirementNode node;
  node.id = as_string(require(doc, "id", where), where + ".id");
  const auto stage = as_string(require(doc, "stage", where), where + ".stage");
  if (auto parsed = parse_stage(stage)) {
    node.stage = *parsed;
  } else {
    throw InputError(where + ".stage: unknown stage '" + stage + "'");
  }
  node.text = doc.contains("text") ? as_string(doc["text"], where + ".text") : "";
  if (doc.contains("derived_from") && !doc["derived_from"].is_null()) {
    node.derived_from = as_string(doc["derived_from"], where + ".derived_from");
  }
  if (doc.contains("model_ref") && !doc["model_ref"].is_null()) {
    node.model_ref = as_string(doc["model_ref"], where + ".model_ref");
  }
  if (doc.contains("constraint_refs")) {
    node.constraint_refs =
        as_string_list(doc["constraint_refs"], where + ".constraint_refs");
  }
  return node;
}

}  // namespace

RefinementMap refinement_from_json(const nlohmann::json& doc,
                                   std::string_view where_view) {
  const std::string where(where_view);
  expect_object(doc, where);
  for (const auto& key : unknown_keys(
           doc, {"id", "black_model", "white_model", "step_map", "budgets"})) {
    throw InputError(where + ": unknown key '" + key + "'");
  }
  RefinementMap map;
  map.id = as_string(require(doc, "id", where), where + ".id");
  map.black_model =
      as_string(require(doc, "black_model", where), where + ".black_model");
  map.white_model =
      as_string(require(doc, "white_model", where), where + ".white_model");
  const auto& steps = require(doc, "step_map", where);
  expect_object(steps, where + ".step_map");
  for (auto it = steps.begin(); it != steps.end(); ++it) {
    map.step_map.push_back(StepRefinement{
        it.key(),
        as_string_list(it.value(), where + ".step_map." + it.key())});
  }
  if (doc.contains("budgets")) {
    const auto& budgets = doc["budgets"];
    expect_array(budgets, where + ".budgets");
    for (std::size_t i = 0; i < budgets.size(); ++i) {
      const std::string at = where + ".budgets[" + std::to_string(i) + "]";
      const auto& b = budgets[i];
      expect_object(b, at);
      for (const auto& key :
           unknown_keys(b, {"id", "from", "to", "budget_s", "function"})) {
        throw InputError(at + ": unknown key '" + key + "'");
      }
      BudgetSegment segment;
      segment.id = as_string(require(b, "id", at), at + ".id");
      segment.from_step = as_string(require(b, "from", at), at + ".from");
      segment.to_step = as_string(require(b, "to", at), at + ".to");
      segment.budget_seconds =
          as_number(require(b, "budget_s", at), at + ".budget_s");
      if (b.contains("function")) {
        segment.function = as_string(b["function"], at + ".function");
      }
      map.budgets.push_back(std::move(segment));
    }
  }
  return map;
}

const EventChainModel* TraceabilityDocument::find_model(std::string_view id) const {
  for (const auto& m : models) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

TraceabilityDocument traceability_from_json(
    const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  TraceabilityDocument out;
  expect_object(doc, "traceability");
  note_unknown(doc, "traceability",
               {"models", "requirements", "refinements", "end_to_end"},
               out.schema_findings);

  if (doc.contains("models")) {
    const auto& models = doc["models"];
    expect_array(models, "models");
    for (std::size_t i = 0; i < models.size(); ++i) {
      LoadedModel loaded;
      if (models[i].is_string()) {
        loaded = load_model(base_dir / models[i].get<std::string>());
      } else {
        loaded = model_from_json(models[i]);
      }
      out.models.push_back(std::move(loaded.model));
      for (auto& f : loaded.schema_findings) {
        out.schema_findings.push_back(std::move(f));
      }
    }
  }
  if (doc.contains("requirements")) {
    const auto& reqs = doc["requirements"];
    expect_array(reqs, "requirements");
    for (std::size_t i = 0; i < reqs.size(); ++i) {
      out.requirements.push_back(requirement_from_json(
          reqs[i], "requirements[" + std::to_string(i) + "]",
          out.schema_findings));
    }
  }
  if (doc.contains("refinements")) {
    const auto& refs = doc["refinements"];
    expect_array(refs, "refinements");
    for (std::size_t i = 0; i < refs.size(); ++i) {
      out.refinements.push_back(refinement_from_json(
          refs[i], "refinements[" + std::to_string(i) + "]"));
    }
  }
  if (doc.contains("end_to_end")) {
    const auto& e2e = doc["end_to_end"];
    expect_array(e2e, "end_to_end");
    for (std::size_t i = 0; i < e2e.size(); ++i) {
      const std::string where = "end_to_end[" + std::to_string(i) + "]";
      auto item = e2e[i];
      expect_object(item, where);
      EndToEndRequirement req;
      req.model = as_string(require(item, "model", where), where + ".model");
      item.erase("model");
      req.constraint = constraint_from_json(item, where, nullptr);
      out.end_to_end.push_back(std::move(req));
    }
  }
  return out;
}

TraceabilityDocument load_traceability(const std::filesystem::path& path) {
  try {
    return traceability_from_json(read_json_file(path), path.parent_path());
  } catch (const InputError& e) {
    const std::string what = e.what();
    if (what.rfind(path.string(), 0) == 0) throw;
    throw InputError(path.string() + ": " + what);
  }
}

bool looks_like_traceability(const nlohmann::json& doc) {
  return doc.is_object() &&
         (doc.contains("requirements") || doc.contains("refinements"));
}

}  // namespace ecsim
