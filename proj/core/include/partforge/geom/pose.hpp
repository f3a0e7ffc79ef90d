#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace partforge::geom {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Rigid transform stored as translation plus intrinsic XYZ Euler angles:
/// R = Rx(rx) * Ry(ry) * Rz(rz). Angles live in (-pi, pi].
struct Pose6D {
  double tx = 0, ty = 0, tz = 0;
  double rx = 0, ry = 0, rz = 0;

  static Pose6D identity() { return {}; }
  static Pose6D translation(double x, double y, double z) { return {x, y, z, 0, 0, 0}; }
  static Pose6D translation(const Vec3& t) { return {t.x(), t.y(), t.z(), 0, 0, 0}; }

  Vec3 t() const { return {tx, ty, tz}; }
  Mat3 rotation() const;
  bool finite() const;

  bool operator==(const Pose6D&) const = default;
};

double normalize_angle(double a);

Mat3 euler_to_matrix(double rx, double ry, double rz);
/// Inverse of euler_to_matrix; ry is returned in [-pi/2, pi/2].
Vec3 matrix_to_euler(const Mat3& r);

Pose6D from_rotation_translation(const Mat3& r, const Vec3& t);

/// Applies b first, then a.
Pose6D compose(const Pose6D& a, const Pose6D& b);
Pose6D invert(const Pose6D& p);

Vec3 transform_point(const Pose6D& p, const Vec3& x);

/// Pre-evaluated rotation matrix form, for hot loops.
struct Rigid {
  Mat3 r = Mat3::Identity();
  Vec3 t = Vec3::Zero();

  Rigid() = default;
  Rigid(const Mat3& rot, const Vec3& trans) : r(rot), t(trans) {}
  explicit Rigid(const Pose6D& p) : r(p.rotation()), t(p.t()) {}

  Vec3 operator*(const Vec3& x) const { return r * x + t; }
  Rigid operator*(const Rigid& o) const { return {r * o.r, r * o.t + t}; }
  Rigid inverse() const { return {r.transpose(), -(r.transpose() * t)}; }
  Pose6D pose() const { return from_rotation_translation(r, t); }
};

using PointCloud = std::vector<Vec3>;

PointCloud transform_points(const Pose6D& p, std::span<const Vec3> cloud);

/// Rotation angle of r in [0, pi].
double rotation_angle(const Mat3& r);

}  // namespace partforge::geom
