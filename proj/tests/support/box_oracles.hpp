#pragma once

#include <algorithm>
#include <cmath>

#include "partforge/geom/pose.hpp"

namespace partforge::testing {

struct OrientedBox {
  geom::Vec3 half;
  geom::Pose6D pose;
};

// Largest separation over the 15 candidate axes. Positive means the boxes are
// apart by at least that much; negative means they overlap on every axis.
inline double sat_separation(const OrientedBox& a, const OrientedBox& b) {
  const geom::Mat3 ra = a.pose.rotation();
  const geom::Mat3 rb = b.pose.rotation();
  const geom::Vec3 d = b.pose.t() - a.pose.t();
  geom::Vec3 axes[15];
  int n = 0;
  for (int i = 0; i < 3; ++i) axes[n++] = ra.col(i);
  for (int i = 0; i < 3; ++i) axes[n++] = rb.col(i);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) axes[n++] = ra.col(i).cross(rb.col(j));
  }
  double best = -INFINITY;
  for (int k = 0; k < n; ++k) {
    const double len = axes[k].norm();
    if (len < 1e-9) continue;
    const geom::Vec3 l = axes[k] / len;
    double pa = 0, pb = 0;
    for (int i = 0; i < 3; ++i) {
      pa += a.half(i) * std::abs(ra.col(i).dot(l));
      pb += b.half(i) * std::abs(rb.col(i).dot(l));
    }
    best = std::max(best, std::abs(d.dot(l)) - pa - pb);
  }
  return best;
}

// Exact distance from a world point to a solid oriented box.
inline double point_box_distance(const geom::Vec3& p, const OrientedBox& b) {
  const geom::Vec3 local = b.pose.rotation().transpose() * (p - b.pose.t());
  geom::Vec3 out;
  for (int i = 0; i < 3; ++i) out(i) = std::max(0.0, std::abs(local(i)) - b.half(i));
  return out.norm();
}

}  // namespace partforge::testing
