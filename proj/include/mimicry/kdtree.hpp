#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "mimicry/error.hpp"
#include "mimicry/geometry.hpp"

namespace mimicry::trajopt {

/// Exact nearest-neighbour index over a fixed 3D point set. The tree is an
/// implicit balanced KD-tree: the node of range [lo, hi) sits at the midpoint
/// and splits on the axis of largest extent.
class ObstacleIndex {
 public:
  struct Hit {
    double distance = std::numeric_limits<double>::infinity();
    std::size_t index = 0;  // into points()
  };

  ObstacleIndex() = default;
  explicit ObstacleIndex(std::vector<Point3D> points) : points_(std::move(points)) {
    for (const auto& p : points_) require(is_finite(p), ErrorCode::kInvalidParameter, "obstacle point is not finite");
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    axis_.assign(points_.size(), 0);
    build(0, order_.size());
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<Point3D>& points() const { return points_; }

  /// Nearest point; equal distances resolve to the smallest point index.
  Hit nearest(const Point3D& q) const {
    require(!empty(), ErrorCode::kNoObstacle, "nearest query on an empty obstacle index");
    Best best;
    search(0, order_.size(), q, best);
    return {std::sqrt(best.d2), best.index};
  }

  double nearest_distance(const Point3D& q) const { return nearest(q).distance; }

  static double squared_distance(const Point3D& a, const Point3D& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
  }

 private:
  struct Best {
    double d2 = std::numeric_limits<double>::infinity();
    std::size_t index = std::numeric_limits<std::size_t>::max();
  };

  static double coord(const Point3D& p, int axis) { return axis == 0 ? p.x : (axis == 1 ? p.y : p.z); }

  void build(std::size_t lo, std::size_t hi) {
    if (hi - lo <= 1) return;
    Point3D mn = points_[order_[lo]], mx = mn;
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& p = points_[order_[i]];
      mn = {std::min(mn.x, p.x), std::min(mn.y, p.y), std::min(mn.z, p.z)};
      mx = {std::max(mx.x, p.x), std::max(mx.y, p.y), std::max(mx.z, p.z)};
    }
    const Point3D ext = mx - mn;
    const int axis = ext.x >= ext.y && ext.x >= ext.z ? 0 : (ext.y >= ext.z ? 1 : 2);
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                     [&](std::size_t a, std::size_t b) { return coord(points_[a], axis) < coord(points_[b], axis); });
    axis_[mid] = axis;
    build(lo, mid);
    build(mid + 1, hi);
  }

  void search(std::size_t lo, std::size_t hi, const Point3D& q, Best& best) const {
    if (lo >= hi) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    const std::size_t idx = order_[mid];
    const double d2 = squared_distance(q, points_[idx]);
    if (d2 < best.d2 || (d2 == best.d2 && idx < best.index)) best = {d2, idx};
    if (hi - lo == 1) return;
    const int axis = axis_[mid];
    const double diff = coord(q, axis) - coord(points_[idx], axis);
    const bool left_first = diff < 0.0;
    if (left_first) {
      search(lo, mid, q, best);
      if (diff * diff <= best.d2) search(mid + 1, hi, q, best);
    } else {
      search(mid + 1, hi, q, best);
      if (diff * diff <= best.d2) search(lo, mid, q, best);
    }
  }

  std::vector<Point3D> points_;
  std::vector<std::size_t> order_;
  std::vector<int> axis_;
};

inline ObstacleIndex build_obstacle_index(std::vector<Point3D> points) { return ObstacleIndex(std::move(points)); }

inline double nearest_distance(const ObstacleIndex& index, const Point3D& q) { return index.nearest_distance(q); }

}  // namespace mimicry::trajopt
