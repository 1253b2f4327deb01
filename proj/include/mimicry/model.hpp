#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mimicry/error.hpp"
#include "mimicry/geometry.hpp"

namespace mimicry {

/// Ordered 3D waypoints of a manipulated object, each tagged with the source
/// frame it was lifted from.
struct Trajectory {
  std::vector<Point3D> waypoints;
  std::vector<std::int64_t> frame_index;
  std::string object_id;

  std::size_t size() const { return waypoints.size(); }
  bool executable() const { return waypoints.size() >= 2; }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Throws kValidation when frame indices are missing or not strictly increasing.
inline void check_trajectory(const Trajectory& traj) {
  require(traj.frame_index.size() == traj.waypoints.size(), ErrorCode::kValidation,
          "trajectory frame_index length differs from waypoint count");
  for (std::size_t i = 1; i < traj.frame_index.size(); ++i) {
    require(traj.frame_index[i] > traj.frame_index[i - 1], ErrorCode::kValidation,
            "trajectory frame_index must be strictly increasing");
  }
  for (const auto& p : traj.waypoints) {
    require(is_finite(p), ErrorCode::kValidation, "trajectory waypoint is not finite");
  }
}

enum class Relation { kOn, kHolding };

inline std::string_view to_string(Relation r) { return r == Relation::kOn ? "on" : "holding"; }

inline Relation parse_relation(std::string_view s) {
  if (s == "on") return Relation::kOn;
  if (s == "holding") return Relation::kHolding;
  throw Error(ErrorCode::kSchemaViolation, "unknown precondition relation '" + std::string(s) + "'");
}

/// `on(subject, object)` or `holding(subject)`; `object` is empty for holding.
struct Predicate {
  std::string subject;
  Relation relation = Relation::kOn;
  std::string object;

  friend bool operator==(const Predicate&, const Predicate&) = default;
};

struct SubtaskSpec {
  std::string desc;
  std::string obj;
  std::string loc;
  std::string guide;
  std::vector<Predicate> precond;

  friend bool operator==(const SubtaskSpec&, const SubtaskSpec&) = default;
};

enum class PlanMode { kMimic, kConstrained, kSkillTransfer, kTextOnly };

inline std::string_view to_string(PlanMode m) {
  switch (m) {
    case PlanMode::kMimic: return "mimic";
    case PlanMode::kConstrained: return "constrained";
    case PlanMode::kSkillTransfer: return "skill-transfer";
    case PlanMode::kTextOnly: return "text-only";
  }
  return "mimic";
}

inline PlanMode parse_plan_mode(std::string_view s) {
  if (s == "mimic") return PlanMode::kMimic;
  if (s == "constrained") return PlanMode::kConstrained;
  if (s == "skill-transfer") return PlanMode::kSkillTransfer;
  if (s == "text-only") return PlanMode::kTextOnly;
  throw Error(ErrorCode::kParse, "unknown planning mode '" + std::string(s) + "'");
}

struct TaskPlan {
  std::vector<SubtaskSpec> subtasks;
  PlanMode provenance = PlanMode::kMimic;

  friend bool operator==(const TaskPlan&, const TaskPlan&) = default;
};

struct SceneObject {
  std::string id;
  Point3D position;
  std::optional<double> yaw;
  double radius = 0.03;
  std::string category;  // semantic class, e.g. "apple"
  std::string group;     // coarser family, e.g. "fruit"
  bool disturbed = false;

  friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

struct Region {
  std::string id;
  Point3D min;
  Point3D max;
  std::string category;

  Point3D center() const { return 0.5 * (min + max); }
  bool contains(const Point3D& p, double tolerance = 0.0) const {
    return p.x >= min.x - tolerance && p.x <= max.x + tolerance && p.y >= min.y - tolerance &&
           p.y <= max.y + tolerance && p.z >= min.z - tolerance && p.z <= max.z + tolerance;
  }

  friend bool operator==(const Region&, const Region&) = default;
};

/// World model: objects and regions are kept in declaration order.
struct SceneState {
  std::vector<SceneObject> objects;
  std::vector<Region> regions;
  std::vector<Point3D> obstacles;
  std::optional<std::string> held_object;

  const SceneObject* find_object(std::string_view id) const {
    auto it = std::find_if(objects.begin(), objects.end(), [&](const auto& o) { return o.id == id; });
    return it == objects.end() ? nullptr : &*it;
  }
  SceneObject* find_object(std::string_view id) {
    auto it = std::find_if(objects.begin(), objects.end(), [&](const auto& o) { return o.id == id; });
    return it == objects.end() ? nullptr : &*it;
  }
  const Region* find_region(std::string_view id) const {
    auto it = std::find_if(regions.begin(), regions.end(), [&](const auto& r) { return r.id == id; });
    return it == regions.end() ? nullptr : &*it;
  }

  /// First region (declaration order) containing the object's centroid.
  std::optional<std::string> region_of(std::string_view object_id, double tolerance = 0.0) const {
    const SceneObject* obj = find_object(object_id);
    if (obj == nullptr) return std::nullopt;
    for (const auto& r : regions) {
      if (r.contains(obj->position, tolerance)) return r.id;
    }
    return std::nullopt;
  }

  friend bool operator==(const SceneState&, const SceneState&) = default;
};

/// Category of an id when none is declared: the prefix before the last '_'.
inline std::string default_category(std::string_view id) {
  const auto pos = id.rfind('_');
  return std::string(pos == std::string_view::npos ? id : id.substr(0, pos));
}

struct Verdict {
  bool pass = false;
  std::string reason;  // "ok" | "disturbed" | "out-of-region" | other adapter-supplied tag

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Geometric success predicate for a placement.
inline Verdict placement_verdict(const Point3D& position, bool disturbed, const Region& region, double tolerance) {
  if (disturbed) return {false, "disturbed"};
  if (!region.contains(position, tolerance)) return {false, "out-of-region"};
  return {true, "ok"};
}

struct Diagnostic {
  std::string rule;
  std::string subject;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

inline std::vector<Diagnostic> validate_scene(const SceneState& scene) {
  std::vector<Diagnostic> out;
  std::set<std::string> seen;
  auto claim = [&](const std::string& id, std::string_view what) {
    if (id.empty()) {
      out.push_back({"empty-id", id, std::string(what) + " with empty id"});
    } else if (!seen.insert(id).second) {
      out.push_back({"duplicate-id", id, "id '" + id + "' declared more than once"});
    }
  };
  for (const auto& o : scene.objects) {
    claim(o.id, "object");
    if (!(o.radius > 0.0) || !std::isfinite(o.radius)) {
      out.push_back({"radius", o.id, "object '" + o.id + "' must have a positive bounding radius"});
    }
    if (!is_finite(o.position) || (o.yaw && !std::isfinite(*o.yaw))) {
      out.push_back({"finite", o.id, "object '" + o.id + "' has a non-finite pose"});
    }
  }
  for (const auto& r : scene.regions) {
    claim(r.id, "region");
    if (!is_finite(r.min) || !is_finite(r.max)) {
      out.push_back({"finite", r.id, "region '" + r.id + "' has non-finite bounds"});
    } else if (r.min.x > r.max.x || r.min.y > r.max.y || r.min.z > r.max.z) {
      out.push_back({"region-bounds", r.id, "region '" + r.id + "' has min > max"});
    }
  }
  for (std::size_t i = 0; i < scene.obstacles.size(); ++i) {
    if (!is_finite(scene.obstacles[i])) {
      out.push_back({"finite", "obstacle[" + std::to_string(i) + "]", "non-finite obstacle point"});
    }
  }
  if (scene.held_object && scene.find_object(*scene.held_object) == nullptr) {
    out.push_back({"held-object", *scene.held_object,
                   "held object '" + *scene.held_object + "' is not declared"});
  }
  return out;
}

}  // namespace mimicry
