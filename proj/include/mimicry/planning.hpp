#pragma once

// Demonstration abstraction and unified subtask planning. The planner adapter
// does the semantic work; this module owns the request/response contract, the
// grounding of identifiers, and the precondition-order checks.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mimicry/adapters.hpp"
#include "mimicry/error.hpp"
#include "mimicry/model.hpp"
#include "mimicry/serialization.hpp"

namespace mimicry::planning {

/// A keyframe as presented to the planner: its frame index and the caption the
/// demonstration (or a captioning adapter) attached to it.
struct KeyframeDescriptor {
  std::int64_t frame = 0;
  std::string label;

  friend bool operator==(const KeyframeDescriptor&, const KeyframeDescriptor&) = default;
};

struct BaselineStep {
  std::string action;
  std::string object;
  std::string destination;
  std::vector<std::int64_t> keyframes;

  friend bool operator==(const BaselineStep&, const BaselineStep&) = default;
};

struct BaselinePlan {
  std::vector<BaselineStep> steps;

  friend bool operator==(const BaselinePlan&, const BaselinePlan&) = default;
};

struct SceneSummaryEntry {
  std::string id;
  std::string kind;  // "object" | "region"
  std::string category;
  std::string group;
  std::optional<std::string> region;  // objects only: region currently containing it

  friend bool operator==(const SceneSummaryEntry&, const SceneSummaryEntry&) = default;
};

struct PlanningRequest {
  std::optional<BaselinePlan> baseline;
  std::vector<SceneSummaryEntry> scene_summary;
  std::optional<std::string> language;
  PlanMode mode = PlanMode::kMimic;
  int attempt = 0;

  void validate() const {
    switch (mode) {
      case PlanMode::kMimic:
        require(!language.has_value(), ErrorCode::kValidation, "mimic mode takes no language command");
        require(baseline.has_value(), ErrorCode::kValidation, "mimic mode requires a baseline plan");
        break;
      case PlanMode::kConstrained:
        require(language.has_value() && !language->empty(), ErrorCode::kValidation,
                "constrained mode requires a language command");
        require(baseline.has_value(), ErrorCode::kValidation, "constrained mode requires a baseline plan");
        break;
      case PlanMode::kSkillTransfer:
        require(baseline.has_value(), ErrorCode::kValidation, "skill-transfer mode requires a baseline plan");
        break;
      case PlanMode::kTextOnly:
        require(!baseline.has_value(), ErrorCode::kValidation, "text-only mode takes no baseline plan");
        require(language.has_value() && !language->empty(), ErrorCode::kValidation,
                "text-only mode requires a language command");
        break;
    }
    if (baseline) {
      require(!baseline->steps.empty(), ErrorCode::kValidation, "baseline plan is empty");
      for (const auto& s : baseline->steps) {
        require(!s.keyframes.empty(), ErrorCode::kValidation, "baseline step without keyframes");
      }
    }
  }
};

// --- encoding ----------------------------------------------------------------

inline json to_json(const KeyframeDescriptor& k) { return json{{"frame", k.frame}, {"label", k.label}}; }

inline json to_json(const BaselinePlan& plan) {
  json steps = json::array();
  for (const auto& s : plan.steps) {
    steps.push_back(json{{"action", s.action}, {"object", s.object}, {"destination", s.destination},
                         {"keyframes", s.keyframes}});
  }
  return json{{"steps", steps}};
}

inline json to_json(const SceneSummaryEntry& e) {
  json j{{"id", e.id}, {"kind", e.kind}, {"category", e.category}, {"group", e.group}};
  j["region"] = e.region ? json(*e.region) : json(nullptr);
  return j;
}

inline json to_json(const PlanningRequest& r) {
  json summary = json::array();
  for (const auto& e : r.scene_summary) summary.push_back(to_json(e));
  json j{{"stage", "unify"}, {"mode", std::string(to_string(r.mode))}};
  j["baseline"] = r.baseline ? to_json(*r.baseline) : json(nullptr);
  j["language"] = r.language ? json(*r.language) : json(nullptr);
  j["scene_summary"] = summary;
  j["attempt"] = r.attempt;
  return j;
}

/// Decodes a schema-checked planner "unify" response body.
inline TaskPlan plan_from_response(const json& body, PlanMode provenance) {
  TaskPlan plan;
  plan.provenance = provenance;
  for (const auto& js : body.at("subtasks")) {
    SubtaskSpec s;
    s.desc = js.at("desc").get<std::string>();
    s.obj = js.at("obj").get<std::string>();
    s.loc = js.at("loc").get<std::string>();
    s.guide = js.at("guide").get<std::string>();
    for (const auto& jp : js.at("precond")) {
      Predicate p;
      p.relation = parse_relation(jp.at("relation").get<std::string>());
      p.subject = jp.at("subject").get<std::string>();
      if (p.relation == Relation::kOn) p.object = jp.at("object").get<std::string>();
      s.precond.push_back(std::move(p));
    }
    plan.subtasks.push_back(std::move(s));
  }
  return plan;
}

/// Reads a plan file in the format written by `to_json(const TaskPlan&)`.
inline TaskPlan plan_from_json(const json& j) {
  const auto check = adapters::check_response(adapters::Role::kPlanner, json{{"stage", "unify"}},
                                              json{{"subtasks", j.value("subtasks", json::array())}});
  if (!check.ok()) throw Error(ErrorCode::kParse, "plan: " + check.summary());
  return plan_from_response(j, parse_plan_mode(j.value("provenance", "mimic")));
}

// --- scene summaries ---------------------------------------------------------

inline std::vector<SceneSummaryEntry> summarize_scene(const SceneState& scene) {
  std::vector<SceneSummaryEntry> out;
  for (const auto& o : scene.objects) {
    out.push_back({o.id, "object", o.category, o.group, scene.region_of(o.id)});
  }
  for (const auto& r : scene.regions) out.push_back({r.id, "region", r.category, r.category, std::nullopt});
  return out;
}

// --- precondition ordering -----------------------------------------------------

/// Walks the plan in order against a symbolic state (object -> region, held
/// object). A precondition that is false at its subtask but produced by a later
/// subtask is an ordering violation; one never produced is unsatisfiable.
inline std::vector<Diagnostic> precondition_diagnostics(const TaskPlan& plan,
                                                        std::map<std::string, std::string> location,
                                                        std::optional<std::string> held) {
  std::vector<Diagnostic> out;
  for (std::size_t n = 0; n < plan.subtasks.size(); ++n) {
    const auto& s = plan.subtasks[n];
    for (const auto& p : s.precond) {
      bool holds = false;
      if (p.relation == Relation::kOn) {
        auto it = location.find(p.subject);
        holds = it != location.end() && it->second == p.object;
      } else {
        holds = held && *held == p.subject;
      }
      if (holds) continue;
      std::optional<std::size_t> producer;
      for (std::size_t k = n; k < plan.subtasks.size() && !producer; ++k) {
        const auto& later = plan.subtasks[k];
        if (p.relation == Relation::kOn && later.obj == p.subject && later.loc == p.object) producer = k;
      }
      const std::string what = std::string(to_string(p.relation)) + "(" + p.subject +
                               (p.relation == Relation::kOn ? ", " + p.object : "") + ")";
      if (producer) {
        out.push_back({"precondition-order", "subtask " + std::to_string(n + 1),
                       "subtask " + std::to_string(n + 1) + " requires " + what +
                           " which is only produced by subtask " + std::to_string(*producer + 1)});
      } else {
        out.push_back({"precondition-unsatisfiable", "subtask " + std::to_string(n + 1),
                       "subtask " + std::to_string(n + 1) + " requires " + what + " which never holds"});
      }
    }
    location[s.obj] = s.loc;
    held.reset();
  }
  return out;
}

inline std::vector<Diagnostic> validate_plan(const TaskPlan& plan, const SceneState& scene) {
  std::vector<Diagnostic> out;
  auto object_known = [&](const std::string& id) { return scene.find_object(id) != nullptr; };
  auto region_known = [&](const std::string& id) { return scene.find_region(id) != nullptr; };
  if (plan.subtasks.empty()) out.push_back({"empty-plan", "", "plan has no subtasks"});
  for (std::size_t n = 0; n < plan.subtasks.size(); ++n) {
    const auto& s = plan.subtasks[n];
    const std::string where = "subtask " + std::to_string(n + 1);
    if (!object_known(s.obj)) out.push_back({"unknown-object", s.obj, where + " references unknown object '" + s.obj + "'"});
    if (!region_known(s.loc)) out.push_back({"unknown-region", s.loc, where + " references unknown region '" + s.loc + "'"});
    for (const auto& p : s.precond) {
      if (!object_known(p.subject)) {
        out.push_back({"unknown-object", p.subject, where + " precondition references unknown object '" + p.subject + "'"});
      }
      if (p.relation == Relation::kOn && !region_known(p.object)) {
        out.push_back({"unknown-region", p.object, where + " precondition references unknown region '" + p.object + "'"});
      }
    }
  }
  std::map<std::string, std::string> location;
  for (const auto& o : scene.objects) {
    if (auto r = scene.region_of(o.id)) location[o.id] = *r;
  }
  auto order = precondition_diagnostics(plan, std::move(location), scene.held_object);
  out.insert(out.end(), order.begin(), order.end());
  return out;
}

// --- operations ----------------------------------------------------------------

inline BaselinePlan abstract_demonstration(const std::vector<KeyframeDescriptor>& keyframes,
                                           const adapters::Adapter& planner) {
  require(!keyframes.empty(), ErrorCode::kInsufficientData, "abstraction needs at least one keyframe");
  json kfs = json::array();
  for (const auto& k : keyframes) kfs.push_back(to_json(k));
  const auto response = planner.call(json{{"stage", "abstract"}, {"keyframes", kfs}});
  const json& body = response.payload;
  if (body.at("steps").empty()) {
    throw Error(ErrorCode::kSchemaViolation, "planner returned an empty baseline plan", body.dump());
  }
  BaselinePlan plan;
  for (const auto& js : body.at("steps")) {
    plan.steps.push_back({js.at("action").get<std::string>(), js.at("object").get<std::string>(),
                          js.at("destination").get<std::string>(),
                          js.at("keyframes").get<std::vector<std::int64_t>>()});
  }
  return plan;
}

inline TaskPlan unify_plan(const PlanningRequest& request, const adapters::Adapter& planner) {
  request.validate();
  const auto response = planner.call(to_json(request));
  TaskPlan plan = plan_from_response(response.payload, request.mode);
  if (plan.subtasks.empty()) {
    throw Error(ErrorCode::kSchemaViolation, "planner returned an empty plan", response.payload.dump());
  }
  if (request.mode == PlanMode::kMimic && plan.subtasks.size() != request.baseline->steps.size()) {
    throw Error(ErrorCode::kSchemaViolation, "mimic plan length differs from baseline", response.payload.dump());
  }

  std::set<std::string> objects, regions;
  std::map<std::string, std::string> location;
  for (const auto& e : request.scene_summary) {
    (e.kind == "region" ? regions : objects).insert(e.id);
    if (e.kind == "object" && e.region) location[e.id] = *e.region;
  }
  std::set<std::string> unresolved;
  for (const auto& s : plan.subtasks) {
    if (!objects.count(s.obj)) unresolved.insert(s.obj);
    if (!regions.count(s.loc)) unresolved.insert(s.loc);
    for (const auto& p : s.precond) {
      if (!objects.count(p.subject)) unresolved.insert(p.subject);
      if (p.relation == Relation::kOn && !regions.count(p.object)) unresolved.insert(p.object);
    }
  }
  if (!unresolved.empty()) {
    std::string list;
    for (const auto& id : unresolved) list += (list.empty() ? "" : ", ") + id;
    throw Error(ErrorCode::kGrounding, "unresolved identifiers: " + list, list);
  }
  for (const auto& d : precondition_diagnostics(plan, location, std::nullopt)) {
    if (d.rule == "precondition-order") throw Error(ErrorCode::kPlanCycle, d.message);
  }
  for (auto& s : plan.subtasks) {
    if (s.guide.find(s.obj) == std::string::npos || s.guide.find(s.loc) == std::string::npos) {
      s.guide += " (move " + s.obj + " to " + s.loc + ")";
    }
  }
  return plan;
}

}  // namespace mimicry::planning
