#pragma once

// JSON encodings of the core model. Key order is fixed (ordered_json) so that
// serialized output is byte-stable.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "mimicry/error.hpp"
#include "mimicry/geometry.hpp"
#include "mimicry/model.hpp"

namespace mimicry {

using json = nlohmann::ordered_json;

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& context) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, context + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::kParse, context + ": missing key '" + key + "'");
  return *it;
}

template <typename T>
T get(const json& j, const char* key, const std::string& context) {
  const json& v = field(j, key, context);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, context + "." + key + ": " + e.what());
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback, const std::string& context) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  return get<T>(j, key, context);
}

}  // namespace detail

inline json to_json(const Point3D& p) { return json::array({p.x, p.y, p.z}); }
inline json to_json(Point2D p) { return json::array({p.u, p.v}); }

inline Point3D point3_from_json(const json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
      !j[2].is_number()) {
    throw Error(ErrorCode::kParse, context + ": expected [x, y, z]");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline Point2D point2_from_json(const json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::kParse, context + ": expected [u, v]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const CameraIntrinsics& k) {
  return json{{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx},
              {"cy", k.cy}, {"width", k.width}, {"height", k.height}};
}

inline CameraIntrinsics intrinsics_from_json(const json& j, const std::string& context) {
  CameraIntrinsics k;
  k.fx = detail::get<double>(j, "fx", context);
  k.fy = detail::get<double>(j, "fy", context);
  k.cx = detail::get<double>(j, "cx", context);
  k.cy = detail::get<double>(j, "cy", context);
  k.width = detail::get<int>(j, "width", context);
  k.height = detail::get<int>(j, "height", context);
  if (!k.valid()) throw Error(ErrorCode::kValidation, context + ": invalid camera intrinsics");
  return k;
}

inline json to_json(const CameraExtrinsics& e) {
  json rows = json::array();
  for (const auto& r : e.rotation) rows.push_back(json::array({r[0], r[1], r[2]}));
  return json{{"rotation", rows}, {"translation", to_json(e.translation)}};
}

/// Accepts either {rotation, translation} or {eye, target[, up]}.
inline CameraExtrinsics extrinsics_from_json(const json& j, const std::string& context) {
  if (j.contains("eye")) {
    const Point3D up = j.contains("up") ? point3_from_json(j.at("up"), context + ".up")
                                        : Point3D{0, 0, 1};
    return CameraExtrinsics::look_at(point3_from_json(detail::field(j, "eye", context), context + ".eye"),
                                     point3_from_json(detail::field(j, "target", context), context + ".target"),
                                     up);
  }
  CameraExtrinsics e;
  const json& rot = detail::field(j, "rotation", context);
  if (!rot.is_array() || rot.size() != 3) throw Error(ErrorCode::kParse, context + ".rotation: expected 3 rows");
  for (int r = 0; r < 3; ++r) {
    const Point3D row = point3_from_json(rot[r], context + ".rotation");
    e.rotation[r] = {row.x, row.y, row.z};
  }
  e.translation = point3_from_json(detail::field(j, "translation", context), context + ".translation");
  return e;
}

// --- SceneState ------------------------------------------------------------

inline json to_json(const SceneState& scene) {
  json objects = json::array();
  for (const auto& o : scene.objects) {
    json jo{{"id", o.id}, {"position", to_json(o.position)}};
    if (o.yaw) jo["yaw"] = *o.yaw;
    jo["radius"] = o.radius;
    jo["category"] = o.category;
    jo["group"] = o.group;
    jo["disturbed"] = o.disturbed;
    objects.push_back(std::move(jo));
  }
  json regions = json::array();
  for (const auto& r : scene.regions) {
    regions.push_back(json{{"id", r.id}, {"min", to_json(r.min)}, {"max", to_json(r.max)},
                           {"category", r.category}});
  }
  json obstacles = json::array();
  for (const auto& p : scene.obstacles) obstacles.push_back(to_json(p));
  json out{{"objects", objects}, {"regions", regions}, {"obstacles", obstacles}};
  out["held_object"] = scene.held_object ? json(*scene.held_object) : json(nullptr);
  return out;
}

/// Expands an obstacle box helper {min, max, spacing} into grid points.
inline void append_obstacle_box(const json& box, std::vector<Point3D>& out, const std::string& context) {
  const Point3D lo = point3_from_json(detail::field(box, "min", context), context + ".min");
  const Point3D hi = point3_from_json(detail::field(box, "max", context), context + ".max");
  const double step = detail::get<double>(box, "spacing", context);
  if (!(step > 0.0)) throw Error(ErrorCode::kValidation, context + ".spacing must be positive");
  auto count = [&](double a, double b) { return static_cast<int>(std::floor((b - a) / step + 1e-9)) + 1; };
  const int nx = count(lo.x, hi.x), ny = count(lo.y, hi.y), nz = count(lo.z, hi.z);
  for (int i = 0; i < nx; ++i)
    for (int k = 0; k < ny; ++k)
      for (int m = 0; m < nz; ++m) out.push_back({lo.x + i * step, lo.y + k * step, lo.z + m * step});
}

inline SceneState scene_from_json(const json& j, const std::string& context = "scene") {
  SceneState scene;
  const json& objects = detail::field(j, "objects", context);
  if (!objects.is_array()) throw Error(ErrorCode::kParse, context + ".objects: expected an array");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string ctx = context + ".objects[" + std::to_string(i) + "]";
    const json& jo = objects[i];
    SceneObject o;
    o.id = detail::get<std::string>(jo, "id", ctx);
    o.position = point3_from_json(detail::field(jo, "position", ctx), ctx + ".position");
    if (jo.contains("yaw") && !jo.at("yaw").is_null()) o.yaw = detail::get<double>(jo, "yaw", ctx);
    o.radius = detail::get<double>(jo, "radius", ctx);
    o.category = detail::get_or<std::string>(jo, "category", default_category(o.id), ctx);
    o.group = detail::get_or<std::string>(jo, "group", o.category, ctx);
    o.disturbed = detail::get_or<bool>(jo, "disturbed", false, ctx);
    scene.objects.push_back(std::move(o));
  }
  if (j.contains("regions")) {
    const json& regions = j.at("regions");
    if (!regions.is_array()) throw Error(ErrorCode::kParse, context + ".regions: expected an array");
    for (std::size_t i = 0; i < regions.size(); ++i) {
      const std::string ctx = context + ".regions[" + std::to_string(i) + "]";
      Region r;
      r.id = detail::get<std::string>(regions[i], "id", ctx);
      r.min = point3_from_json(detail::field(regions[i], "min", ctx), ctx + ".min");
      r.max = point3_from_json(detail::field(regions[i], "max", ctx), ctx + ".max");
      r.category = detail::get_or<std::string>(regions[i], "category", default_category(r.id), ctx);
      scene.regions.push_back(std::move(r));
    }
  }
  if (j.contains("obstacles")) {
    const json& obstacles = j.at("obstacles");
    if (!obstacles.is_array()) throw Error(ErrorCode::kParse, context + ".obstacles: expected an array");
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
      scene.obstacles.push_back(point3_from_json(obstacles[i], context + ".obstacles[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("obstacle_boxes")) {
    const json& boxes = j.at("obstacle_boxes");
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      append_obstacle_box(boxes[i], scene.obstacles, context + ".obstacle_boxes[" + std::to_string(i) + "]");
    }
  }
  if (j.contains("held_object") && !j.at("held_object").is_null()) {
    scene.held_object = detail::get<std::string>(j, "held_object", context);
  }
  return scene;
}

// --- Plans -----------------------------------------------------------------

inline json to_json(const Predicate& p) {
  json j{{"relation", std::string(to_string(p.relation))}, {"subject", p.subject}};
  if (p.relation == Relation::kOn) j["object"] = p.object;
  return j;
}

inline json to_json(const SubtaskSpec& s) {
  json pre = json::array();
  for (const auto& p : s.precond) pre.push_back(to_json(p));
  return json{{"desc", s.desc}, {"obj", s.obj}, {"loc", s.loc}, {"guide", s.guide}, {"precond", pre}};
}

inline json to_json(const TaskPlan& plan) {
  json subtasks = json::array();
  for (const auto& s : plan.subtasks) subtasks.push_back(to_json(s));
  return json{{"provenance", std::string(to_string(plan.provenance))}, {"subtasks", subtasks}};
}

inline json to_json(const Trajectory& t) {
  json wps = json::array();
  for (const auto& p : t.waypoints) wps.push_back(to_json(p));
  return json{{"object_id", t.object_id}, {"frame_index", t.frame_index}, {"waypoints", wps}};
}

inline Trajectory trajectory_from_json(const json& j, const std::string& context = "trajectory") {
  Trajectory t;
  t.object_id = detail::get<std::string>(j, "object_id", context);
  t.frame_index = detail::get<std::vector<std::int64_t>>(j, "frame_index", context);
  const json& wps = detail::field(j, "waypoints", context);
  for (std::size_t i = 0; i < wps.size(); ++i) {
    t.waypoints.push_back(point3_from_json(wps[i], context + ".waypoints[" + std::to_string(i) + "]"));
  }
  check_trajectory(t);
  return t;
}

// --- Files -----------------------------------------------------------------

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte points into `text`; report the line for humans.
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i) line += text[i] == '\n';
    throw Error(ErrorCode::kParse, path + ":" + std::to_string(line) + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path + "'");
}

}  // namespace mimicry
