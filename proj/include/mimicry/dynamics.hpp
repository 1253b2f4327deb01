#pragma once

// Imagined-rollout trajectory distillation: obtain a rollout for one subtask
// through the generator/tracker/depth adapters, simplify the object's pixel
// track with Ramer-Douglas-Peucker, and lift the retained waypoints to 3D with
// the depth of the frame each waypoint came from.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mimicry/adapters.hpp"
#include "mimicry/error.hpp"
#include "mimicry/geometry.hpp"
#include "mimicry/model.hpp"
#include "mimicry/serialization.hpp"

namespace mimicry::dynamics {

// --- camera model --------------------------------------------------------------

inline Point3D backproject(Point2D pixel, double depth, const CameraIntrinsics& k) {
  if (!(depth > 0.0) || !std::isfinite(depth)) {
    throw Error(ErrorCode::kInvalidDepth, "depth must be positive, got " + std::to_string(depth));
  }
  return {(pixel.u - k.cx) * depth / k.fx, (pixel.v - k.cy) * depth / k.fy, depth};
}

inline Point2D project(const Point3D& p, const CameraIntrinsics& k) {
  if (!(p.z > 0.0)) throw Error(ErrorCode::kInvalidDepth, "cannot project a point behind the camera");
  return {k.fx * p.x / p.z + k.cx, k.fy * p.y / p.z + k.cy};
}

// --- depth maps ----------------------------------------------------------------

/// Per-frame depth in meters. Either sparse (pixel -> z) or a dense grid in
/// which non-positive or NaN cells are undefined.
class DepthMap {
 public:
  using Pixel = std::pair<int, int>;

  DepthMap() = default;
  static DepthMap dense(int width, int height, std::vector<double> values) {
    require(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) == values.size(),
            ErrorCode::kInvalidParameter, "dense depth map size mismatch");
    DepthMap m;
    m.width_ = width;
    m.height_ = height;
    m.dense_ = std::move(values);
    return m;
  }

  bool is_dense() const { return !dense_.empty(); }

  void set(int u, int v, double z) {
    if (is_dense()) {
      if (u >= 0 && v >= 0 && u < width_ && v < height_) dense_[static_cast<std::size_t>(v) * width_ + u] = z;
    } else {
      sparse_[{u, v}] = z;
    }
  }

  std::optional<double> at(int u, int v) const {
    double z = 0.0;
    if (is_dense()) {
      if (u < 0 || v < 0 || u >= width_ || v >= height_) return std::nullopt;
      z = dense_[static_cast<std::size_t>(v) * width_ + u];
    } else {
      auto it = sparse_.find({u, v});
      if (it == sparse_.end()) return std::nullopt;
      z = it->second;
    }
    if (!(z > 0.0) || !std::isfinite(z)) return std::nullopt;
    return z;
  }

  /// Defined entries in (v, u) scan order for dense maps, (u, v) order for sparse.
  std::vector<std::pair<Pixel, double>> entries() const {
    std::vector<std::pair<Pixel, double>> out;
    if (is_dense()) {
      for (int v = 0; v < height_; ++v)
        for (int u = 0; u < width_; ++u)
          if (auto z = at(u, v)) out.push_back({{u, v}, *z});
    } else {
      for (const auto& [px, z] : sparse_) out.push_back({px, z});
    }
    return out;
  }

  const std::map<Pixel, double>& sparse() const { return sparse_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> dense_;
  std::map<Pixel, double> sparse_;
};

inline constexpr int kDepthFallbackRadius = 5;

/// Depth at the rounded pixel, else the median of defined depths within a
/// 5 px radius, else kDepthGap.
inline double lookup_depth(const DepthMap& map, Point2D pixel) {
  const int u0 = static_cast<int>(std::lround(pixel.u));
  const int v0 = static_cast<int>(std::lround(pixel.v));
  if (auto z = map.at(u0, v0)) return *z;
  std::vector<double> nearby;
  constexpr int r = kDepthFallbackRadius;
  for (int dv = -r; dv <= r; ++dv)
    for (int du = -r; du <= r; ++du)
      if (du * du + dv * dv <= r * r)
        if (auto z = map.at(u0 + du, v0 + dv)) nearby.push_back(*z);
  if (nearby.empty()) {
    throw Error(ErrorCode::kDepthGap, "no depth within " + std::to_string(r) + " px of (" +
                                          std::to_string(u0) + ", " + std::to_string(v0) + ")");
  }
  std::sort(nearby.begin(), nearby.end());
  const std::size_t n = nearby.size();
  return n % 2 == 1 ? nearby[n / 2] : 0.5 * (nearby[n / 2 - 1] + nearby[n / 2]);
}

// --- rollouts --------------------------------------------------------------------

struct RolloutFrame {
  std::map<std::string, Point2D> tracks;
  DepthMap depth;
};

struct FutureRollout {
  std::vector<RolloutFrame> frames;
  CameraIntrinsics intrinsics;

  std::size_t size() const { return frames.size(); }
};

inline void check_rollout(const FutureRollout& r) {
  require(r.frames.size() >= 2, ErrorCode::kInsufficientData, "rollout needs at least 2 frames");
  require(r.intrinsics.valid(), ErrorCode::kValidation, "rollout intrinsics are invalid");
  for (std::size_t k = 0; k < r.frames.size(); ++k) {
    for (const auto& [id, px] : r.frames[k].tracks) {
      if (!is_finite(px) || !r.intrinsics.contains(px)) {
        throw Error(ErrorCode::kTracking, "track of '" + id + "' leaves the image in frame " + std::to_string(k));
      }
    }
    for (const auto& [px, z] : r.frames[k].depth.entries()) {
      require(z > 0.0, ErrorCode::kValidation, "rollout depth must be positive");
    }
  }
}

struct RdpParams {
  double epsilon_px = 4.0;

  void validate() const {
    require(epsilon_px > 0.0 && std::isfinite(epsilon_px), ErrorCode::kInvalidParameter, "epsilon_px must be > 0");
  }
};

/// Distance from p to the closed segment [a, b].
inline double point_segment_distance(Point2D p, Point2D a, Point2D b) {
  const Point2D ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double s = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + s * ab);
}

/// Indices retained by RDP. A span is split at its farthest interior point
/// (first one on ties) while that distance exceeds epsilon.
inline std::vector<std::size_t> rdp_indices(const std::vector<Point2D>& points, double epsilon) {
  require(points.size() >= 2, ErrorCode::kInsufficientData, "RDP needs at least 2 points");
  std::vector<bool> keep(points.size(), false);
  keep.front() = keep.back() = true;
  std::vector<std::pair<std::size_t, std::size_t>> spans{{0, points.size() - 1}};
  while (!spans.empty()) {
    const auto [first, last] = spans.back();
    spans.pop_back();
    double worst = -1.0;
    std::size_t split = first;
    for (std::size_t i = first + 1; i < last; ++i) {
      const double d = point_segment_distance(points[i], points[first], points[last]);
      if (d > worst) {
        worst = d;
        split = i;
      }
    }
    if (split != first && worst > epsilon) {
      keep[split] = true;
      spans.push_back({split, last});
      spans.push_back({first, split});
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (keep[i]) out.push_back(i);
  return out;
}

inline std::vector<Point2D> simplify_path_rdp(const std::vector<Point2D>& points, const RdpParams& params) {
  params.validate();
  std::vector<Point2D> out;
  for (std::size_t i : rdp_indices(points, params.epsilon_px)) out.push_back(points[i]);
  return out;
}

inline Trajectory extract_trajectory(const FutureRollout& rollout, const std::string& object_id,
                                     const RdpParams& rdp) {
  rdp.validate();
  check_rollout(rollout);
  std::vector<Point2D> track;
  track.reserve(rollout.size());
  for (std::size_t k = 0; k < rollout.size(); ++k) {
    auto it = rollout.frames[k].tracks.find(object_id);
    if (it == rollout.frames[k].tracks.end()) {
      throw Error(ErrorCode::kTracking, "'" + object_id + "' is not tracked in frame " + std::to_string(k));
    }
    track.push_back(it->second);
  }
  Trajectory traj;
  traj.object_id = object_id;
  for (std::size_t k : rdp_indices(track, rdp.epsilon_px)) {
    const double z = lookup_depth(rollout.frames[k].depth, track[k]);
    traj.waypoints.push_back(backproject(track[k], z, rollout.intrinsics));
    traj.frame_index.push_back(static_cast<std::int64_t>(k));
  }
  return traj;
}

// --- rollout files -----------------------------------------------------------------

/// {"intrinsics": {...}, "frames": [{"tracks": {id: [u, v]}, "depth": [[u, v, z], ...]}]}
inline json to_json(const FutureRollout& r) {
  json frames = json::array();
  for (const auto& f : r.frames) {
    json tracks = json::object();
    for (const auto& [id, px] : f.tracks) tracks[id] = mimicry::to_json(px);
    json depth = json::array();
    for (const auto& [px, z] : f.depth.entries()) depth.push_back(json::array({px.first, px.second, z}));
    frames.push_back(json{{"tracks", tracks}, {"depth", depth}});
  }
  return json{{"intrinsics", mimicry::to_json(r.intrinsics)}, {"frames", frames}};
}

inline FutureRollout rollout_from_json(const json& j, const std::string& context = "rollout") {
  FutureRollout r;
  r.intrinsics = intrinsics_from_json(mimicry::detail::field(j, "intrinsics", context), context + ".intrinsics");
  const json& frames = mimicry::detail::field(j, "frames", context);
  if (!frames.is_array()) throw Error(ErrorCode::kParse, context + ".frames: expected an array");
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const std::string ctx = context + ".frames[" + std::to_string(k) + "]";
    RolloutFrame f;
    const json& tracks = mimicry::detail::field(frames[k], "tracks", ctx);
    for (auto it = tracks.begin(); it != tracks.end(); ++it) {
      f.tracks[it.key()] = point2_from_json(it.value(), ctx + ".tracks." + it.key());
    }
    if (frames[k].contains("depth")) {
      for (const auto& e : frames[k].at("depth")) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
            !e[2].is_number()) {
          throw Error(ErrorCode::kParse, ctx + ".depth: expected [u, v, z] entries with integer pixels");
        }
        f.depth.set(e[0].get<int>(), e[1].get<int>(), e[2].get<double>());
      }
    }
    r.frames.push_back(std::move(f));
  }
  check_rollout(r);
  return r;
}

// --- imagination through adapters ---------------------------------------------------

/// What the generator is conditioned on: the current scene as seen by the camera.
struct Observation {
  SceneState scene;
  CameraIntrinsics intrinsics;
  CameraExtrinsics extrinsics;
};

inline json observation_to_json(const Observation& obs) {
  json objects = json::array();
  for (const auto& o : obs.scene.objects) {
    objects.push_back(json{{"id", o.id}, {"position", mimicry::to_json(o.position)}, {"radius", o.radius}});
  }
  json regions = json::array();
  for (const auto& r : obs.scene.regions) {
    regions.push_back(json{{"id", r.id}, {"min", mimicry::to_json(r.min)}, {"max", mimicry::to_json(r.max)}});
  }
  return json{{"objects", objects}, {"regions", regions}};
}

struct ImagineOptions {
  int frames = 16;
  int subtask = 0;
  int attempt = 0;
};

/// Generator -> tracker -> depth. The generator returns camera-frame object
/// positions per imagined frame; the tracker reduces them to a pixel track and
/// the depth role supplies sparse per-frame depth around the track.
inline FutureRollout imagine_future(const Observation& observation, const SubtaskSpec& subtask,
                                    const adapters::AdapterSuite& suite, const ImagineOptions& options = {}) {
  require(!subtask.guide.empty(), ErrorCode::kValidation, "guide text is empty");
  require(options.frames >= 2, ErrorCode::kInvalidParameter, "rollout needs at least 2 frames");
  const json camera{{"intrinsics", mimicry::to_json(observation.intrinsics)},
                    {"extrinsics", mimicry::to_json(observation.extrinsics)}};
  json gen_req{{"guide", subtask.guide}, {"obj", subtask.obj},       {"loc", subtask.loc},
               {"frames", options.frames}, {"subtask", options.subtask}, {"attempt", options.attempt},
               {"observation", observation_to_json(observation)},       {"camera", camera}};
  const json frames = suite.generator.call(gen_req).payload.at("frames");
  for (std::size_t k = 0; k < frames.size(); ++k) {
    if (!frames[k].at("objects").contains(subtask.obj)) {
      throw Error(ErrorCode::kHallucination,
                  "imagined frame " + std::to_string(k) + " lost target '" + subtask.obj + "'");
    }
  }

  const json intrinsics = mimicry::to_json(observation.intrinsics);
  const json track = suite.tracker
                         .call(json{{"object", subtask.obj}, {"intrinsics", intrinsics}, {"frames", frames},
                                    {"subtask", options.subtask}, {"attempt", options.attempt}})
                         .payload.at("track");
  for (std::size_t k = 0; k < track.size(); ++k) {
    if (track[k].is_null()) {
      throw Error(ErrorCode::kHallucination, "tracker lost '" + subtask.obj + "' in frame " + std::to_string(k));
    }
  }
  const json depth = suite.depth
                         .call(json{{"intrinsics", intrinsics}, {"frames", frames}, {"queries", track},
                                    {"subtask", options.subtask}, {"attempt", options.attempt}})
                         .payload.at("frames");

  FutureRollout rollout;
  rollout.intrinsics = observation.intrinsics;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    RolloutFrame f;
    f.tracks[subtask.obj] = point2_from_json(track[k], "tracker.track");
    for (const auto& e : depth[k].at("depth")) f.depth.set(e[0].get<int>(), e[1].get<int>(), e[2].get<double>());
    rollout.frames.push_back(std::move(f));
  }
  check_rollout(rollout);
  return rollout;
}

}  // namespace mimicry::dynamics
