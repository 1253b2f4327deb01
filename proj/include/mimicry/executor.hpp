#pragma once

// Kinematic point-gripper simulator and the per-trial execute/verify/replan loop.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mimicry/adapters.hpp"
#include "mimicry/dynamics.hpp"
#include "mimicry/error.hpp"
#include "mimicry/geometry.hpp"
#include "mimicry/kdtree.hpp"
#include "mimicry/model.hpp"
#include "mimicry/planning.hpp"
#include "mimicry/serialization.hpp"
#include "mimicry/trajopt.hpp"

namespace mimicry::executor {

struct GraspCandidate {
  Point3D pose;
  double yaw = 0.0;
  double stability = 0.0;
  std::int64_t id = 0;

  friend bool operator==(const GraspCandidate&, const GraspCandidate&) = default;
};

inline json to_json(const GraspCandidate& g) {
  return json{{"id", g.id}, {"pose", mimicry::to_json(g.pose)}, {"yaw", g.yaw}, {"stability", g.stability}};
}

inline GraspCandidate grasp_from_json(const json& j, const std::string& ctx = "grasp") {
  GraspCandidate g;
  g.id = mimicry::detail::get<std::int64_t>(j, "id", ctx);
  g.pose = point3_from_json(mimicry::detail::field(j, "pose", ctx), ctx + ".pose");
  g.yaw = mimicry::detail::get_or<double>(j, "yaw", 0.0, ctx);
  g.stability = mimicry::detail::get<double>(j, "stability", ctx);
  require(g.stability >= 0.0 && g.stability <= 1.0, ErrorCode::kParse, ctx + ": stability outside [0, 1]");
  return g;
}

/// Asks the selector to choose; the answer must name one of the candidates.
inline GraspCandidate select_grasp(const std::vector<GraspCandidate>& candidates, const adapters::Adapter& selector,
                                   const std::string& object_id = "object") {
  if (candidates.empty()) throw Error(ErrorCode::kNoGrasp, "no grasp candidates for '" + object_id + "'");
  json cands = json::array();
  for (const auto& c : candidates) {
    require(c.stability >= 0.0 && c.stability <= 1.0, ErrorCode::kValidation, "grasp stability outside [0, 1]");
    cands.push_back(to_json(c));
  }
  const auto res = selector.call(json{{"task", "grasp"}, {"object", object_id}, {"candidates", cands}});
  const auto id = res.payload.at("id").get<std::int64_t>();
  for (const auto& c : candidates) {
    if (c.id == id) return c;
  }
  throw Error(ErrorCode::kNoGrasp, "selector chose unknown candidate " + std::to_string(id), res.payload.dump());
}

inline std::vector<GraspCandidate> propose_grasps(const SceneObject& object, const adapters::Adapter& selector,
                                                  int subtask = 0, int attempt = 0) {
  const json req{{"task", "propose"},
                 {"object", json{{"id", object.id}, {"position", mimicry::to_json(object.position)}, {"radius", object.radius}}},
                 {"subtask", subtask},
                 {"attempt", attempt}};
  const json payload = selector.call(req).payload;
  std::vector<GraspCandidate> out;
  for (const auto& c : payload.at("candidates")) out.push_back(grasp_from_json(c, "selector.candidate"));
  return out;
}

struct ExecParams {
  double clearance = 0.02;     // meters
  double grasp_radius = 0.03;  // meters
  double step = 0.01;          // gripper interpolation step, meters

  void validate() const {
    require(clearance >= 0.0, ErrorCode::kInvalidParameter, "clearance must be >= 0");
    require(grasp_radius > 0.0, ErrorCode::kInvalidParameter, "grasp_radius must be > 0");
    require(step > 0.0, ErrorCode::kInvalidParameter, "step must be > 0");
  }
};

struct CollisionEvent {
  std::size_t step = 0;
  std::size_t waypoint = 0;  // segment start index in the trajectory
  std::string with;          // object id, or "obstacle[i]"
  double distance = 0.0;     // gripper to obstacle point / object surface

  friend bool operator==(const CollisionEvent&, const CollisionEvent&) = default;
};

struct ExecutionLog {
  std::string held_object;
  std::vector<Point3D> gripper;  // one entry per interpolation step, start included
  std::vector<CollisionEvent> collisions;
  bool completed = false;

  friend bool operator==(const ExecutionLog&, const ExecutionLog&) = default;
};

inline json to_json(const ExecutionLog& log) {
  json steps = json::array();
  for (const auto& p : log.gripper) steps.push_back(mimicry::to_json(p));
  json events = json::array();
  for (const auto& e : log.collisions) {
    events.push_back(json{{"step", e.step}, {"waypoint", e.waypoint}, {"with", e.with}, {"distance", e.distance}});
  }
  return json{{"held_object", log.held_object}, {"completed", log.completed}, {"gripper", steps}, {"collisions", events}};
}

struct ExecutionResult {
  SceneState scene;
  ExecutionLog log;
};

/// Moves the gripper from the grasp pose along the waypoints (offset so that
/// the first waypoint coincides with the grasp) in steps of at most
/// `params.step`. The held object keeps its offset to the gripper and is
/// released at the last waypoint. Every step closer than `clearance` to an
/// obstacle point or another object's surface is a collision event; colliding
/// objects, and the held object, are flagged disturbed.
inline ExecutionResult execute_trajectory(const SceneState& scene, const Trajectory& traj, const GraspCandidate& grasp,
                                          const ExecParams& params = {}) {
  params.validate();
  require(traj.size() >= 2, ErrorCode::kInsufficientData, "execution needs >= 2 waypoints");
  ExecutionResult out{scene, {}};
  SceneObject* held = out.scene.find_object(traj.object_id);
  require(held != nullptr, ErrorCode::kValidation, "trajectory object '" + traj.object_id + "' is not in the scene");
  const double reach = distance(grasp.pose, held->position);
  if (reach > params.grasp_radius) {
    throw Error(ErrorCode::kGraspFailure, "grasp " + std::to_string(grasp.id) + " is " + std::to_string(reach) +
                                              " m from '" + held->id + "' (limit " + std::to_string(params.grasp_radius) + ")");
  }
  const std::string held_id = held->id;
  const Vec3 object_offset = held->position - grasp.pose;
  const Vec3 path_offset = grasp.pose - traj.waypoints.front();
  held->disturbed = false;
  out.scene.held_object = held_id;
  out.log.held_object = held_id;

  const trajopt::ObstacleIndex obstacles(scene.obstacles);
  std::vector<bool> touched(out.scene.objects.size(), false);
  bool held_touched = false;

  auto visit = [&](const Point3D& g, std::size_t waypoint) {
    const std::size_t step = out.log.gripper.size();
    out.log.gripper.push_back(g);
    out.scene.find_object(held_id)->position = g + object_offset;
    if (!obstacles.empty()) {
      const auto hit = obstacles.nearest(g);
      if (hit.distance < params.clearance) {
        out.log.collisions.push_back({step, waypoint, "obstacle[" + std::to_string(hit.index) + "]", hit.distance});
        held_touched = true;
      }
    }
    for (std::size_t i = 0; i < out.scene.objects.size(); ++i) {
      const auto& o = out.scene.objects[i];
      if (o.id == held_id) continue;
      const double gap = distance(g, o.position) - o.radius;
      if (gap < params.clearance) {
        out.log.collisions.push_back({step, waypoint, o.id, gap});
        touched[i] = true;
        held_touched = true;
      }
    }
  };

  visit(traj.waypoints.front() + path_offset, 0);
  for (std::size_t w = 0; w + 1 < traj.size(); ++w) {
    const Point3D a = traj.waypoints[w] + path_offset;
    const Point3D b = traj.waypoints[w + 1] + path_offset;
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(distance(a, b) / params.step - 1e-9)));
    for (std::size_t j = 1; j <= n; ++j) visit(j == n ? b : lerp(a, b, static_cast<double>(j) / n), w);
  }

  for (std::size_t i = 0; i < out.scene.objects.size(); ++i) {
    if (touched[i]) out.scene.objects[i].disturbed = true;
  }
  if (held_touched) out.scene.find_object(held_id)->disturbed = true;
  out.scene.held_object.reset();
  out.log.completed = true;
  return out;
}

/// Geometric check of a subtask goal in the given scene.
inline Verdict verify_subtask(const SceneState& scene, const SubtaskSpec& subtask, double tolerance = 0.01) {
  require(tolerance >= 0.0, ErrorCode::kInvalidParameter, "tolerance must be >= 0");
  const SceneObject* obj = scene.find_object(subtask.obj);
  const Region* region = scene.find_region(subtask.loc);
  if (obj == nullptr || region == nullptr) {
    throw Error(ErrorCode::kGrounding, "subtask references unknown '" + (obj == nullptr ? subtask.obj : subtask.loc) + "'",
                obj == nullptr ? subtask.obj : subtask.loc);
  }
  return placement_verdict(obj->position, obj->disturbed, *region, tolerance);
}

/// Preconditions evaluated against the physical scene.
inline bool preconditions_hold(const SceneState& scene, const SubtaskSpec& subtask, double tolerance = 0.0) {
  for (const auto& p : subtask.precond) {
    if (p.relation == Relation::kHolding) {
      if (!scene.held_object || *scene.held_object != p.subject) return false;
      continue;
    }
    const SceneObject* obj = scene.find_object(p.subject);
    const Region* region = scene.find_region(p.object);
    if (obj == nullptr || region == nullptr || !region->contains(obj->position, tolerance)) return false;
  }
  return true;
}

// --- trial loop -------------------------------------------------------------------

/// How a subtask's trajectory is obtained. kStraight ignores the predicted
/// rollout entirely; kFinalOnly keeps only its final waypoint.
enum class Predictor { kFdp, kStraight, kFinalOnly };

struct RunConfig {
  ExecParams exec;
  trajopt::OptParams opt;
  dynamics::RdpParams rdp;
  int frames = 16;
  int replan_budget = 2;
  double verify_tolerance = 0.01;
  bool stop_on_failure = false;
  Predictor predictor = Predictor::kFdp;

  void validate() const {
    exec.validate();
    opt.validate();
    rdp.validate();
    require(frames >= 2, ErrorCode::kInvalidParameter, "frames must be >= 2");
    require(replan_budget >= 0, ErrorCode::kInvalidParameter, "replan_budget must be >= 0");
    require(verify_tolerance >= 0.0, ErrorCode::kInvalidParameter, "verify_tolerance must be >= 0");
  }
};

struct TaskContext {
  SceneState scene;
  CameraIntrinsics intrinsics;
  CameraExtrinsics extrinsics;
  /// Scenario-provided grasps, as offsets from the object centre. Objects
  /// without an entry get candidates from the selector.
  std::map<std::string, std::vector<GraspCandidate>> grasp_offsets;
  /// Template for replanning requests; scene summary and attempt are refreshed.
  std::optional<planning::PlanningRequest> replan_request;
  int expected_subtasks = 0;
};

struct SubtaskOutcome {
  bool pass = false;
  std::string reason;  // "" | plan | predict | execute | verify
  std::string detail;
  int attempts = 0;

  friend bool operator==(const SubtaskOutcome&, const SubtaskOutcome&) = default;
};

struct TrialResult {
  std::vector<SubtaskOutcome> outcomes;
  int replans_used = 0;
  int S = 0;
  int n = 0;
  std::size_t collision_events = 0;
  std::uint64_t simulator_instance = 0;
  std::vector<ExecutionLog> logs;
  SceneState final_scene;

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

inline json to_json(const SubtaskOutcome& o) {
  return json{{"pass", o.pass}, {"reason", o.reason}, {"detail", o.detail}, {"attempts", o.attempts}};
}

inline json to_json(const TrialResult& r, bool with_logs = false) {
  json outcomes = json::array();
  for (const auto& o : r.outcomes) outcomes.push_back(to_json(o));
  json j{{"S_i", r.S},
         {"n_i", r.n},
         {"replans_used", r.replans_used},
         {"collision_events", r.collision_events},
         {"outcomes", outcomes}};
  if (with_logs) {
    json logs = json::array();
    for (const auto& l : r.logs) logs.push_back(to_json(l));
    j["logs"] = logs;
    j["final_scene"] = mimicry::to_json(r.final_scene);
  }
  return j;
}

namespace detail {

inline std::atomic<std::uint64_t>& instance_counter() {
  static std::atomic<std::uint64_t> counter{0};
  return counter;
}

struct Failure {
  std::string reason;
  std::string detail;
  bool abort = false;
};

inline Trajectory straight_line(const SceneObject& obj, const Region& region) {
  const Point3D c = region.center();
  Trajectory t;
  t.object_id = obj.id;
  t.waypoints = {obj.position, {c.x, c.y, std::clamp(obj.position.z, region.min.z, region.max.z)}};
  t.frame_index = {0, 1};
  return t;
}

inline Trajectory predict_world(const SceneState& scene, const TaskContext& ctx, const SubtaskSpec& sub,
                                const adapters::AdapterSuite& suite, const RunConfig& config, int index, int attempt) {
  const SceneObject* obj = scene.find_object(sub.obj);
  const Region* region = scene.find_region(sub.loc);
  if (obj == nullptr || region == nullptr) throw Error(ErrorCode::kGrounding, "subtask '" + sub.desc + "' is not grounded");
  if (config.predictor == Predictor::kStraight) return straight_line(*obj, *region);

  const dynamics::Observation obs{scene, ctx.intrinsics, ctx.extrinsics};
  const auto rollout = dynamics::imagine_future(obs, sub, suite, {config.frames, index, attempt});
  Trajectory traj = dynamics::extract_trajectory(rollout, sub.obj, config.rdp);
  for (auto& p : traj.waypoints) p = ctx.extrinsics.to_world(p);
  if (config.predictor == Predictor::kFinalOnly) {
    traj.waypoints = {obj->position, traj.waypoints.back()};
    traj.frame_index = {0, traj.frame_index.back()};
  }
  return traj;
}

}  // namespace detail

/// Executes `plan` in order. Each subtask gets one attempt plus up to
/// `replan_budget` retries, each preceded by a planner call on the current
/// scene. Preconditions are checked once, before the first attempt. Outcomes
/// are truncated or padded (reason "plan") to `expected_subtasks`.
inline TrialResult run_task(const TaskContext& ctx, const TaskPlan& plan, const adapters::AdapterSuite& suite,
                            const RunConfig& config = {}) {
  config.validate();
  require(ctx.expected_subtasks >= 1, ErrorCode::kValidation, "expected_subtasks must be >= 1");
  TrialResult result;
  result.simulator_instance = ++detail::instance_counter();
  SceneState scene = ctx.scene;
  std::vector<SubtaskSpec> subtasks = plan.subtasks;
  const std::size_t m = static_cast<std::size_t>(ctx.expected_subtasks);
  std::optional<detail::Failure> aborted;

  for (std::size_t n = 0; n < subtasks.size() && n < m && !aborted; ++n) {
    SubtaskOutcome outcome;
    if (!preconditions_hold(scene, subtasks[n])) {
      outcome.reason = "plan";
      outcome.detail = "preconditions unmet";
      result.outcomes.push_back(outcome);
      if (config.stop_on_failure) break;
      continue;
    }
    for (int attempt = 0;; ++attempt) {
      const SubtaskSpec sub = subtasks[n];
      outcome.attempts = attempt + 1;
      std::optional<detail::Failure> failure;
      std::string stage = "predict";
      try {
        Trajectory traj = detail::predict_world(scene, ctx, sub, suite, config, static_cast<int>(n), attempt);

        stage = "execute";
        std::vector<Point3D> blockers = scene.obstacles;
        for (const auto& o : scene.objects) {
          if (o.id != sub.obj) blockers.push_back(o.position);
        }
        const trajopt::ObstacleIndex index(std::move(blockers));
        traj = trajopt::optimize_trajectory(traj, index, config.opt).trajectory;

        const SceneObject& obj = *scene.find_object(sub.obj);
        std::vector<GraspCandidate> candidates;
        if (auto it = ctx.grasp_offsets.find(sub.obj); it != ctx.grasp_offsets.end()) {
          for (auto c : it->second) {
            c.pose = obj.position + c.pose;
            candidates.push_back(c);
          }
        } else {
          candidates = propose_grasps(obj, suite.selector, static_cast<int>(n), attempt);
        }
        const GraspCandidate grasp = select_grasp(candidates, suite.selector, sub.obj);
        auto exec = execute_trajectory(scene, traj, grasp, config.exec);
        scene = std::move(exec.scene);
        result.collision_events += exec.log.collisions.size();
        result.logs.push_back(std::move(exec.log));

        stage = "verify";
        const SceneObject& moved = *scene.find_object(sub.obj);
        const Region& region = *scene.find_region(sub.loc);
        const json req{{"task", "verify"},
                       {"object", json{{"id", moved.id}, {"position", mimicry::to_json(moved.position)}, {"disturbed", moved.disturbed}}},
                       {"region", json{{"id", region.id}, {"min", mimicry::to_json(region.min)}, {"max", mimicry::to_json(region.max)}}},
                       {"tolerance", config.verify_tolerance},
                       {"subtask", static_cast<int>(n)},
                       {"attempt", attempt}};
        const json verdict = suite.selector.call(req).payload;
        if (!verdict.at("pass").get<bool>()) failure = detail::Failure{"verify", verdict.at("reason").get<std::string>()};
      } catch (const Error& e) {
        failure = detail::Failure{stage, e.what(), e.code() == ErrorCode::kAdapterUnavailable};
      }

      if (!failure) {
        outcome.pass = true;
        outcome.reason.clear();
        outcome.detail.clear();
        break;
      }
      outcome.reason = failure->reason;
      outcome.detail = failure->detail;
      if (failure->abort) {
        aborted = failure;
        break;
      }
      if (attempt >= config.replan_budget) break;

      ++result.replans_used;
      if (ctx.replan_request) {
        planning::PlanningRequest req = *ctx.replan_request;
        req.scene_summary = planning::summarize_scene(scene);
        req.attempt = attempt + 1;
        try {
          const TaskPlan replanned = planning::unify_plan(req, suite.planner);
          if (replanned.subtasks.size() == subtasks.size()) {
            std::copy(replanned.subtasks.begin() + static_cast<std::ptrdiff_t>(n), replanned.subtasks.end(),
                      subtasks.begin() + static_cast<std::ptrdiff_t>(n));
          }
        } catch (const Error& e) {
          outcome.reason = "plan";
          outcome.detail = e.what();
          if (e.code() == ErrorCode::kAdapterUnavailable) aborted = detail::Failure{"plan", e.what(), true};
          break;
        }
      }
    }
    result.outcomes.push_back(outcome);
    if (!outcome.pass && config.stop_on_failure) break;
  }

  while (result.outcomes.size() < m) {
    SubtaskOutcome o;
    o.reason = aborted ? aborted->reason : "plan";
    o.detail = aborted ? "trial aborted: " + aborted->detail : "not attempted";
    result.outcomes.push_back(o);
  }
  for (const auto& o : result.outcomes) result.n += o.pass ? 1 : 0;
  result.S = result.n == static_cast<int>(m) ? 1 : 0;
  result.final_scene = std::move(scene);
  return result;
}

}  // namespace mimicry::executor
