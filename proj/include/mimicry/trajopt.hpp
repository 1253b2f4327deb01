#pragma once

// Waypoint refinement: minimize w_smooth * C_smooth + w_coll * C_coll with
//   C_smooth = sum over interior waypoints of (1 - cos(turn angle))
//   C_coll   = sum over all waypoints of 1 / (nearest obstacle distance + phi)
// by gradient descent with Armijo backtracking. Endpoints and waypoint count
// are fixed.

#include <cmath>
#include <string>
#include <vector>

#include "mimicry/error.hpp"
#include "mimicry/geometry.hpp"
#include "mimicry/kdtree.hpp"
#include "mimicry/model.hpp"
#include "mimicry/serialization.hpp"

namespace mimicry::trajopt {

inline constexpr double kDegenerateSegment = 1e-9;  // meters

struct OptParams {
  double w_smooth = 1.0;
  double w_coll = 1.0;
  double phi = 0.05;
  double step_size = 0.05;
  int max_iters = 200;
  double cost_tol = 1e-6;
  double shrink_factor = 0.5;
  double armijo = 1e-4;
  int max_backtracks = 60;

  void validate() const {
    require(w_smooth >= 0.0 && w_coll >= 0.0, ErrorCode::kInvalidParameter, "cost weights must be non-negative");
    require(phi > 0.0, ErrorCode::kInvalidParameter, "phi must be > 0");
    require(step_size > 0.0, ErrorCode::kInvalidParameter, "step_size must be > 0");
    require(max_iters >= 1, ErrorCode::kInvalidParameter, "max_iters must be >= 1");
    require(cost_tol >= 0.0, ErrorCode::kInvalidParameter, "cost_tol must be >= 0");
    require(shrink_factor > 0.0 && shrink_factor < 1.0, ErrorCode::kInvalidParameter,
            "shrink_factor must be in (0, 1)");
    require(max_backtracks >= 1, ErrorCode::kInvalidParameter, "max_backtracks must be >= 1");
  }
};

inline json to_json(const OptParams& p) {
  return json{{"w_smooth", p.w_smooth},         {"w_coll", p.w_coll},       {"phi", p.phi},
              {"step_size", p.step_size},       {"max_iters", p.max_iters}, {"cost_tol", p.cost_tol},
              {"shrink_factor", p.shrink_factor}, {"armijo", p.armijo},   {"max_backtracks", p.max_backtracks}};
}

inline OptParams opt_params_from_json(const json& j, OptParams p = {}) {
  const std::string ctx = "optimizer";
  p.w_smooth = mimicry::detail::get_or<double>(j, "w_smooth", p.w_smooth, ctx);
  p.w_coll = mimicry::detail::get_or<double>(j, "w_coll", p.w_coll, ctx);
  p.phi = mimicry::detail::get_or<double>(j, "phi", p.phi, ctx);
  p.step_size = mimicry::detail::get_or<double>(j, "step_size", p.step_size, ctx);
  p.max_iters = mimicry::detail::get_or<int>(j, "max_iters", p.max_iters, ctx);
  p.cost_tol = mimicry::detail::get_or<double>(j, "cost_tol", p.cost_tol, ctx);
  p.shrink_factor = mimicry::detail::get_or<double>(j, "shrink_factor", p.shrink_factor, ctx);
  p.armijo = mimicry::detail::get_or<double>(j, "armijo", p.armijo, ctx);
  p.max_backtracks = mimicry::detail::get_or<int>(j, "max_backtracks", p.max_backtracks, ctx);
  p.validate();
  return p;
}

inline double smoothness_cost(const std::vector<Point3D>& w) {
  double cost = 0.0;
  for (std::size_t m = 1; m + 1 < w.size(); ++m) {
    const Vec3 a = w[m] - w[m - 1];
    const Vec3 b = w[m + 1] - w[m];
    const double na = norm(a), nb = norm(b);
    if (na < kDegenerateSegment || nb < kDegenerateSegment) continue;
    cost += 1.0 - dot(a, b) / (na * nb);
  }
  return cost;
}

inline double smoothness_cost(const Trajectory& traj) {
  require(traj.size() >= 2, ErrorCode::kInsufficientData, "smoothness cost needs >= 2 waypoints");
  return smoothness_cost(traj.waypoints);
}

inline double collision_cost(const std::vector<Point3D>& w, const ObstacleIndex& index, double phi) {
  require(phi > 0.0, ErrorCode::kInvalidParameter, "phi must be > 0");
  if (index.empty()) return 0.0;
  double cost = 0.0;
  for (const auto& p : w) cost += 1.0 / (index.nearest_distance(p) + phi);
  return cost;
}

inline double collision_cost(const Trajectory& traj, const ObstacleIndex& index, double phi) {
  return collision_cost(traj.waypoints, index, phi);
}

inline double total_cost(const std::vector<Point3D>& w, const ObstacleIndex& index, const OptParams& params) {
  params.validate();
  double cost = 0.0;
  if (params.w_smooth != 0.0) cost += params.w_smooth * smoothness_cost(w);
  if (params.w_coll != 0.0) cost += params.w_coll * collision_cost(w, index, params.phi);
  return cost;
}

inline double total_cost(const Trajectory& traj, const ObstacleIndex& index, const OptParams& params) {
  return total_cost(traj.waypoints, index, params);
}

/// Gradient with respect to waypoints 1..M-2 (M-2 entries). The nearest
/// obstacle is held fixed; coincident waypoints get a zero collision gradient.
inline std::vector<Vec3> cost_gradient(const std::vector<Point3D>& w, const ObstacleIndex& index,
                                       const OptParams& params) {
  params.validate();
  const std::size_t n = w.size();
  std::vector<Vec3> full(n);
  if (params.w_smooth != 0.0) {
    for (std::size_t m = 1; m + 1 < n; ++m) {
      const Vec3 a = w[m] - w[m - 1];
      const Vec3 b = w[m + 1] - w[m];
      const double na = norm(a), nb = norm(b);
      if (na < kDegenerateSegment || nb < kDegenerateSegment) continue;
      const double c = dot(a, b) / (na * nb);
      // d cos / d a and d cos / d b; the cost term is 1 - cos.
      const Vec3 dc_da = (1.0 / (na * nb)) * b - (c / (na * na)) * a;
      const Vec3 dc_db = (1.0 / (na * nb)) * a - (c / (nb * nb)) * b;
      full[m - 1] += params.w_smooth * dc_da;
      full[m] += params.w_smooth * (dc_db - dc_da);
      full[m + 1] -= params.w_smooth * dc_db;
    }
  }
  if (params.w_coll != 0.0 && !index.empty()) {
    for (std::size_t m = 1; m + 1 < n; ++m) {
      const auto hit = index.nearest(w[m]);
      if (hit.distance == 0.0) continue;
      const double s = 1.0 / ((hit.distance + params.phi) * (hit.distance + params.phi) * hit.distance);
      full[m] -= params.w_coll * s * (w[m] - index.points()[hit.index]);
    }
  }
  if (n < 2) return {};
  return {full.begin() + 1, full.end() - 1};
}

inline std::vector<Vec3> cost_gradient(const Trajectory& traj, const ObstacleIndex& index, const OptParams& params) {
  return cost_gradient(traj.waypoints, index, params);
}

struct IterationLog {
  int iter = 0;
  double cost = 0.0;
  double step = 0.0;

  friend bool operator==(const IterationLog&, const IterationLog&) = default;
};

struct OptimizeResult {
  Trajectory trajectory;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  std::vector<IterationLog> log;  // one entry per accepted step
};

/// JSON lines: {"iter":..,"cost":..,"step":..}
inline std::string iteration_log_jsonl(const std::vector<IterationLog>& log) {
  std::string out;
  for (const auto& e : log) out += json{{"iter", e.iter}, {"cost", e.cost}, {"step", e.step}}.dump() + "\n";
  return out;
}

inline OptimizeResult optimize_trajectory(const Trajectory& traj, const ObstacleIndex& index,
                                          const OptParams& params) {
  params.validate();
  require(traj.size() >= 2, ErrorCode::kInsufficientData, "optimization needs >= 2 waypoints");
  OptimizeResult result;
  result.trajectory = traj;
  std::vector<Point3D>& x = result.trajectory.waypoints;
  double f = total_cost(x, index, params);
  result.initial_cost = result.final_cost = f;
  if (traj.size() == 2) return result;

  std::vector<Point3D> trial(x);
  for (int iter = 1; iter <= params.max_iters; ++iter) {
    const std::vector<Vec3> g = cost_gradient(x, index, params);
    double g2 = 0.0;
    for (const auto& v : g) g2 += squared_norm(v);
    if (!(g2 > 0.0) || !std::isfinite(g2)) break;

    double alpha = params.step_size;
    bool accepted = false;
    double f_trial = f;
    for (int b = 0; b < params.max_backtracks; ++b) {
      for (std::size_t m = 1; m + 1 < x.size(); ++m) trial[m] = x[m] - alpha * g[m - 1];
      f_trial = total_cost(trial, index, params);
      if (f_trial <= f - params.armijo * alpha * g2) {
        accepted = true;
        break;
      }
      alpha *= params.shrink_factor;
    }
    if (!accepted) break;
    const double improvement = f - f_trial;
    x = trial;
    f = f_trial;
    result.log.push_back({iter, f, alpha});
    if (improvement < params.cost_tol) break;
  }
  result.final_cost = f;
  return result;
}

}  // namespace mimicry::trajopt
