#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "mimicry/error.hpp"

namespace mimicry {

/// Image-plane position in pixels (u = column, v = row).
struct Point2D {
  double u = 0.0;
  double v = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

inline Point2D operator+(Point2D a, Point2D b) { return {a.u + b.u, a.v + b.v}; }
inline Point2D operator-(Point2D a, Point2D b) { return {a.u - b.u, a.v - b.v}; }
inline Point2D operator*(double s, Point2D a) { return {s * a.u, s * a.v}; }
inline double dot(Point2D a, Point2D b) { return a.u * b.u + a.v * b.v; }
inline double norm(Point2D a) { return std::hypot(a.u, a.v); }
inline double distance(Point2D a, Point2D b) { return norm(a - b); }

/// Metric 3D point or displacement. The frame (camera or world) is implied by
/// the owning structure.
struct Point3D {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3D&, const Point3D&) = default;

  Point3D& operator+=(const Point3D& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Point3D& operator-=(const Point3D& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
};

using Vec3 = Point3D;

inline Point3D operator+(Point3D a, const Point3D& b) { return a += b; }
inline Point3D operator-(Point3D a, const Point3D& b) { return a -= b; }
inline Point3D operator-(const Point3D& a) { return {-a.x, -a.y, -a.z}; }
inline Point3D operator*(double s, const Point3D& a) { return {s * a.x, s * a.y, s * a.z}; }
inline Point3D operator*(const Point3D& a, double s) { return s * a; }
inline double dot(const Point3D& a, const Point3D& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Point3D cross(const Point3D& a, const Point3D& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double squared_norm(const Point3D& a) { return dot(a, a); }
inline double norm(const Point3D& a) { return std::sqrt(squared_norm(a)); }
inline double distance(const Point3D& a, const Point3D& b) { return norm(a - b); }
inline Point3D lerp(const Point3D& a, const Point3D& b, double s) { return a + s * (b - a); }

inline bool is_finite(const Point3D& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}
inline bool is_finite(Point2D p) { return std::isfinite(p.u) && std::isfinite(p.v); }

/// Unsigned angle between two nonzero vectors, in [0, pi].
inline double angle_between(const Vec3& a, const Vec3& b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw Error(ErrorCode::kDegenerateVector, "angle_between requires nonzero vectors");
  }
  const double c = std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
  return std::acos(c);
}

/// Pinhole intrinsics, no distortion.
struct CameraIntrinsics {
  double fx = 600.0;
  double fy = 600.0;
  double cx = 320.0;
  double cy = 240.0;
  int width = 640;
  int height = 480;

  bool valid() const {
    return fx > 0.0 && fy > 0.0 && width > 0 && height > 0 && cx >= 0.0 && cx < width &&
           cy >= 0.0 && cy < height;
  }
  bool contains(Point2D p) const {
    return p.u >= 0.0 && p.v >= 0.0 && p.u < static_cast<double>(width) &&
           p.v < static_cast<double>(height);
  }
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

inline Point3D operator*(const Matrix3& m, const Point3D& p) {
  return {m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z,
          m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
          m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z};
}

inline Matrix3 transpose(const Matrix3& m) {
  Matrix3 t{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) t[r][c] = m[c][r];
  return t;
}

inline constexpr Matrix3 identity3() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

/// Camera-to-world rigid transform: p_world = rotation * p_camera + translation.
struct CameraExtrinsics {
  Matrix3 rotation = identity3();
  Point3D translation{};

  Point3D to_world(const Point3D& p_camera) const { return rotation * p_camera + translation; }
  Point3D to_camera(const Point3D& p_world) const {
    return transpose(rotation) * (p_world - translation);
  }

  /// Camera at `eye` looking at `target`; camera +z is the viewing direction,
  /// +y points down in the image, `up` is the world up direction.
  static CameraExtrinsics look_at(const Point3D& eye, const Point3D& target,
                                  const Point3D& up = {0, 0, 1}) {
    const Point3D forward = target - eye;
    require(norm(forward) > 0.0, ErrorCode::kInvalidParameter, "look_at: eye equals target");
    const Point3D z = (1.0 / norm(forward)) * forward;
    Point3D x = cross(z, up);
    require(norm(x) > 1e-12, ErrorCode::kInvalidParameter, "look_at: up parallel to view");
    x = (1.0 / norm(x)) * x;
    const Point3D y = cross(z, x);
    CameraExtrinsics e;
    // Columns are the camera axes expressed in world coordinates.
    e.rotation = {{{x.x, y.x, z.x}, {x.y, y.y, z.y}, {x.z, y.z, z.z}}};
    e.translation = eye;
    return e;
  }
};

}  // namespace mimicry
