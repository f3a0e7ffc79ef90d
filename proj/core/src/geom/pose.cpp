#include "partforge/geom/pose.hpp"

#include <algorithm>
#include <cmath>

namespace partforge::geom {

double normalize_angle(double a) {
  double r = std::remainder(a, 2.0 * M_PI);
  if (r <= -M_PI) r = M_PI;
  return r;
}

Mat3 euler_to_matrix(double rx, double ry, double rz) {
  const double cx = std::cos(rx), sx = std::sin(rx);
  const double cy = std::cos(ry), sy = std::sin(ry);
  const double cz = std::cos(rz), sz = std::sin(rz);
  Mat3 r;
  r << cy * cz, -cy * sz, sy,
       sx * sy * cz + cx * sz, -sx * sy * sz + cx * cz, -sx * cy,
       -cx * sy * cz + sx * sz, cx * sy * sz + sx * cz, cx * cy;
  return r;
}

Vec3 matrix_to_euler(const Mat3& r) {
  const double s = std::clamp(r(0, 2), -1.0, 1.0);
  const double ry = std::asin(s);
  double rx, rz;
  if (std::abs(s) > 1.0 - 1e-12) {
    // gimbal lock: only rx +- rz is observable, put it all in rx
    rz = 0.0;
    rx = std::atan2(r(2, 1), r(1, 1));
  } else {
    rx = std::atan2(-r(1, 2), r(2, 2));
    rz = std::atan2(-r(0, 1), r(0, 0));
  }
  return {normalize_angle(rx), normalize_angle(ry), normalize_angle(rz)};
}

Mat3 Pose6D::rotation() const { return euler_to_matrix(rx, ry, rz); }

bool Pose6D::finite() const {
  return std::isfinite(tx) && std::isfinite(ty) && std::isfinite(tz) && std::isfinite(rx) &&
         std::isfinite(ry) && std::isfinite(rz);
}

Pose6D from_rotation_translation(const Mat3& r, const Vec3& t) {
  const Vec3 e = matrix_to_euler(r);
  return {t.x(), t.y(), t.z(), e.x(), e.y(), e.z()};
}

Pose6D compose(const Pose6D& a, const Pose6D& b) {
  return (Rigid(a) * Rigid(b)).pose();
}

Pose6D invert(const Pose6D& p) { return Rigid(p).inverse().pose(); }

Vec3 transform_point(const Pose6D& p, const Vec3& x) { return Rigid(p) * x; }

PointCloud transform_points(const Pose6D& p, std::span<const Vec3> cloud) {
  const Rigid t(p);
  PointCloud out;
  out.reserve(cloud.size());
  for (const Vec3& x : cloud) out.push_back(t * x);
  return out;
}

double rotation_angle(const Mat3& r) {
  const double c = std::clamp((r.trace() - 1.0) * 0.5, -1.0, 1.0);
  // acos loses precision near 0; use the skew part there
  const Vec3 s(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  return std::atan2(0.5 * s.norm(), c);
}

}  // namespace partforge::geom
