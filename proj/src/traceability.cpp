#include "ecsim/traceability.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
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

void sort_report(ValidationReport& report) {
  std::sort(report.begin(), report.end(), [](const Finding& a, const Finding& b) {
    return std::tie(a.rule, a.subjects, a.message) <
           std::tie(b.rule, b.subjects, b.message);
  });
}

// Transitive "depends on" relation of a validated model.
class CausalIndex {
 public:
  explicit CausalIndex(const EventChainModel& model) {
    for (const auto& step : model.steps) {
      index_.emplace(step.id, ids_.size());
      ids_.push_back(step.id);
    }
    ancestors_.assign(ids_.size(), std::vector<bool>(ids_.size(), false));
    for (const auto& id : topological_order(model)) {
      const std::size_t v = index_.at(id);
      for (const auto& dep : model.find_step(id)->depends_on) {
        const std::size_t w = index_.at(dep);
        ancestors_[v][w] = true;
        for (std::size_t u = 0; u < ids_.size(); ++u) {
          if (ancestors_[w][u]) ancestors_[v][u] = true;
        }
      }
    }
  }

  bool contains(std::string_view id) const {
    return index_.contains(std::string(id));
  }

  // True when `step` transitively depends on `ancestor` (strict).
  bool depends_on(std::string_view step, std::string_view ancestor) const {
    auto a = index_.find(std::string(step));
    auto b = index_.find(std::string(ancestor));
    if (a == index_.end() || b == index_.end()) return false;
    return ancestors_[a->second][b->second];
  }

  bool depends_on_or_equal(std::string_view step,
                           std::string_view ancestor) const {
    return step == ancestor || depends_on(step, ancestor);
  }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<bool>> ancestors_;
};

void require_valid(const EventChainModel& model) {
  if (auto report = validate_model(model); !report.empty()) {
    throw InvalidModelError(model.id, std::move(report));
  }
}

void require_roles(const RefinementMap& map, const EventChainModel& black,
                   const EventChainModel& white) {
  if (map.black_model != black.id || map.white_model != white.id) {
    throw std::invalid_argument("refinement '" + map.id + "' expects models '" +
                                map.black_model + "' -> '" + map.white_model +
                                "', got '" + black.id + "' -> '" + white.id +
                                "'");
  }
  if (black.viewpoint != Viewpoint::kBlackBox ||
      white.viewpoint != Viewpoint::kWhiteBox) {
    throw std::invalid_argument("refinement '" + map.id +
                                "' needs a black-box and a white-box model");
  }
}

}  // namespace

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kDigitizedParagraph:
      return "digitized_paragraph";
    case Stage::kLegalLanguage:
      return "legal_language";
    case Stage::kTechnicalLanguage:
      return "technical_language";
    case Stage::kEventChainRequirement:
      return "event_chain_requirement";
  }
  return "digitized_paragraph";
}

std::optional<Stage> parse_stage(std::string_view text) {
  for (auto stage : {Stage::kDigitizedParagraph, Stage::kLegalLanguage,
                     Stage::kTechnicalLanguage, Stage::kEventChainRequirement}) {
    if (to_string(stage) == text) return stage;
  }
  return std::nullopt;
}

ValidationReport validate_trace_chain(std::span<const RequirementNode> nodes,
                                      std::span<const EventChainModel> models) {
  ValidationReport report;
  std::map<std::string, const RequirementNode*> by_id;
  std::map<std::string, int> counts;
  for (const auto& node : nodes) {
    ++counts[node.id];
    by_id.emplace(node.id, &node);
  }
  for (const auto& [id, count] : counts) {
    if (count > 1) {
      report.push_back(make_finding("duplicate-requirement-id", {id},
                                    "requirement id '" + id + "' defined " +
                                        std::to_string(count) + " times"));
    }
  }

  auto find_model = [&](const std::string& id) -> const EventChainModel* {
    for (const auto& m : models) {
      if (m.id == id) return &m;
    }
    return nullptr;
  };

  for (const auto& [id, node] : by_id) {
    if (node->derived_from) {
      auto parent = by_id.find(*node->derived_from);
      if (parent == by_id.end()) {
        report.push_back(make_finding(
            "dangling-derive", {id},
            "'" + id + "' derives from unknown node '" + *node->derived_from +
                "'"));
      } else if (static_cast<int>(parent->second->stage) + 1 !=
                 static_cast<int>(node->stage)) {
        report.push_back(make_finding(
            "stage-adjacency", {id, parent->first},
            "'" + id + "' (" + std::string(to_string(node->stage)) +
                ") derives from '" + parent->first + "' (" +
                std::string(to_string(parent->second->stage)) +
                "), which is not the preceding stage"));
      }
    }

    // Walk derive links back to the root; the root must be a paragraph.
    std::set<std::string> visited;
    const RequirementNode* cursor = node;
    bool rooted = false;
    while (cursor != nullptr && visited.insert(cursor->id).second) {
      if (!cursor->derived_from) {
        rooted = cursor->stage == Stage::kDigitizedParagraph;
        break;
      }
      auto parent = by_id.find(*cursor->derived_from);
      cursor = parent == by_id.end() ? nullptr : parent->second;
    }
    if (!rooted) {
      report.push_back(make_finding(
          "orphan", {id},
          "'" + id + "' has no derive path back to a digitized paragraph"));
    }

    const bool is_event_chain = node->stage == Stage::kEventChainRequirement;
    if (is_event_chain && !node->model_ref) {
      report.push_back(make_finding(
          "model-required", {id},
          "event-chain requirement '" + id + "' has no model_ref"));
    }
    if (!is_event_chain && node->model_ref) {
      report.push_back(make_finding(
          "model-ref-stage", {id},
          "'" + id + "' is not an event-chain requirement but has a model_ref"));
    }
    if (!is_event_chain && !node->constraint_refs.empty()) {
      report.push_back(make_finding(
          "constraint-refs-stage", {id},
          "'" + id +
              "' is not an event-chain requirement but has constraint_refs"));
    }
    if (is_event_chain && node->model_ref) {
      const EventChainModel* model = find_model(*node->model_ref);
      if (model == nullptr) {
        report.push_back(make_finding(
            "unknown-model", {id},
            "'" + id + "' references unknown model '" + *node->model_ref + "'"));
      } else {
        for (const auto& ref : node->constraint_refs) {
          if (model->find_constraint(ref) == nullptr) {
            report.push_back(make_finding(
                "unknown-constraint", {id, ref},
                "'" + id + "' references constraint '" + ref +
                    "' that model '" + model->id + "' does not define"));
          }
        }
      }
    }
  }
  sort_report(report);
  return report;
}

const StepRefinement* RefinementMap::image_of(std::string_view black_step) const {
  for (const auto& entry : step_map) {
    if (entry.black_step == black_step) return &entry;
  }
  return nullptr;
}

ValidationReport check_refinement(const RefinementMap& map,
                                  const EventChainModel& black,
                                  const EventChainModel& white) {
  require_valid(black);
  require_valid(white);
  require_roles(map, black, white);
  const CausalIndex white_index(white);

  ValidationReport report;
  std::map<std::string, int> mapped;
  for (const auto& entry : map.step_map) {
    ++mapped[entry.black_step];
    if (black.find_step(entry.black_step) == nullptr) {
      report.push_back(make_finding(
          "unknown-black-step", {entry.black_step},
          "map refines '" + entry.black_step +
              "', which the black-box model does not define"));
    }
    if (entry.white_steps.empty()) {
      report.push_back(make_finding(
          "empty-image", {entry.black_step},
          "'" + entry.black_step + "' is refined into no white-box step"));
    }
    bool all_known = true;
    for (const auto& w : entry.white_steps) {
      if (!white_index.contains(w)) {
        all_known = false;
        report.push_back(make_finding(
            "unknown-white-step", {entry.black_step, w},
            "'" + entry.black_step + "' maps to unknown white-box step '" + w +
                "'"));
      }
    }
    if (!all_known) continue;
    for (std::size_t i = 1; i < entry.white_steps.size(); ++i) {
      const auto& prev = entry.white_steps[i - 1];
      const auto& next = entry.white_steps[i];
      if (!white_index.depends_on(next, prev)) {
        report.push_back(make_finding(
            "chain-connectivity", {entry.black_step, prev, next},
            "in the image of '" + entry.black_step + "', '" + next +
                "' does not causally depend on '" + prev + "'"));
      }
    }
  }
  for (const auto& [id, count] : mapped) {
    if (count > 1) {
      report.push_back(make_finding("duplicate-mapping", {id},
                                    "'" + id + "' is mapped " +
                                        std::to_string(count) + " times"));
    }
  }

  auto usable_image = [&](const std::string& id) -> const StepRefinement* {
    const StepRefinement* image = map.image_of(id);
    if (image == nullptr || image->white_steps.empty()) return nullptr;
    for (const auto& w : image->white_steps) {
      if (!white_index.contains(w)) return nullptr;
    }
    return image;
  };

  for (const auto& step : black.steps) {
    if (map.image_of(step.id) == nullptr) {
      report.push_back(make_finding(
          "total-mapping", {step.id},
          "black-box step '" + step.id + "' is not refined"));
      continue;
    }
    const StepRefinement* image = usable_image(step.id);
    if (image == nullptr) continue;
    for (const auto& dep : step.depends_on) {
      const StepRefinement* dep_image = usable_image(dep);
      if (dep_image == nullptr) continue;
      const auto& head = image->white_steps.front();
      const auto& tail = dep_image->white_steps.back();
      if (!white_index.depends_on(head, tail)) {
        report.push_back(make_finding(
            "causal-preservation", {step.id, dep},
            "'" + step.id + "' depends on '" + dep + "' but white-box step '" +
                head + "' has no causal path to '" + tail + "'"));
      }
    }
  }
  sort_report(report);
  return report;
}

std::chrono::nanoseconds to_nanoseconds(double seconds) {
  if (!std::isfinite(seconds)) {
    throw std::invalid_argument("duration must be finite");
  }
  return std::chrono::nanoseconds(std::llround(seconds * 1e9));
}

BudgetReport check_budgeting(const RefinementMap& map,
                             const TimingConstraint& end_to_end,
                             const EventChainModel& black,
                             const EventChainModel& white) {
  require_valid(black);
  require_valid(white);
  require_roles(map, black, white);
  if (end_to_end.direction != Direction::kMax) {
    throw std::invalid_argument("end-to-end constraint '" + end_to_end.id +
                                "' must be Max-direction to be budgeted");
  }
  if (end_to_end.kind == ConstraintKind::kPeriodicity) {
    throw std::invalid_argument("end-to-end constraint '" + end_to_end.id +
                                "' is a periodicity constraint");
  }
  const StepRefinement* from = map.image_of(end_to_end.from_step);
  const StepRefinement* to = map.image_of(end_to_end.to_step);
  if (from == nullptr || to == nullptr || from->white_steps.empty() ||
      to->white_steps.empty()) {
    throw std::invalid_argument("end-to-end constraint '" + end_to_end.id +
                                "' endpoints are not refined by '" + map.id +
                                "'");
  }

  const CausalIndex index(white);
  const std::string& path_start = from->white_steps.front();
  const std::string& path_end = to->white_steps.back();

  BudgetReport report;
  report.map_id = map.id;
  report.constraint_id = end_to_end.id;
  report.bound = to_nanoseconds(end_to_end.bound_seconds);
  for (const auto& segment : map.budgets) {
    const bool on_path = index.depends_on_or_equal(segment.from_step, path_start) &&
                         index.depends_on(segment.to_step, segment.from_step) &&
                         index.depends_on_or_equal(path_end, segment.to_step);
    if (!on_path) {
      throw std::invalid_argument("budget '" + segment.id + "' (" +
                                  segment.from_step + " -> " + segment.to_step +
                                  ") is not on the refined path " + path_start +
                                  " -> " + path_end);
    }
    if (!(segment.budget_seconds >= 0.0)) {
      throw std::invalid_argument("budget '" + segment.id + "' is negative");
    }
    report.sum += to_nanoseconds(segment.budget_seconds);
    report.per_segment.push_back(segment);
  }
  using Seconds = std::chrono::duration<double>;
  report.sum_seconds = std::chrono::duration_cast<Seconds>(report.sum).count();
  report.bound_seconds = std::chrono::duration_cast<Seconds>(report.bound).count();
  report.slack_seconds =
      std::chrono::duration_cast<Seconds>(report.bound - report.sum).count();
  report.satisfied = report.sum <= report.bound;
  return report;
}

std::vector<BudgetReport> compare_budget_alternatives(
    std::span<const RefinementMap> maps, const TimingConstraint& end_to_end,
    const EventChainModel& black, std::span<const EventChainModel> white_models) {
  std::vector<BudgetReport> ok;
  std::vector<BudgetReport> failed;
  for (const auto& map : maps) {
    const EventChainModel* white = nullptr;
    for (const auto& m : white_models) {
      if (m.id == map.white_model) white = &m;
    }
    BudgetReport entry;
    entry.map_id = map.id;
    entry.constraint_id = end_to_end.id;
    try {
      if (white == nullptr) {
        throw std::invalid_argument("white-box model '" + map.white_model +
                                    "' not provided");
      }
      if (auto findings = check_refinement(map, black, *white); !findings.empty()) {
        throw std::invalid_argument("refinement check failed: " +
                                    format_finding(findings.front()));
      }
      ok.push_back(check_budgeting(map, end_to_end, black, *white));
    } catch (const std::exception& e) {
      entry.error = e.what();
      failed.push_back(std::move(entry));
    }
  }
  std::stable_sort(ok.begin(), ok.end(), [](const auto& a, const auto& b) {
    return std::tie(a.sum, a.map_id) < std::tie(b.sum, b.map_id);
  });
  std::stable_sort(failed.begin(), failed.end(),
                   [](const auto& a, const auto& b) { return a.map_id < b.map_id; });
  ok.insert(ok.end(), std::make_move_iterator(failed.begin()),
            std::make_move_iterator(failed.end()));
  return ok;
}

}  // namespace ecsim
