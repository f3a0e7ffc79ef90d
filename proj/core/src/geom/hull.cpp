#include "partforge/geom/hull.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "partforge/common/error.hpp"

namespace partforge::geom {

namespace {

struct Face {
  std::array<int, 3> v;
  Plane plane;
  bool alive = true;
};

Plane plane_through(const Vec3& a, const Vec3& b, const Vec3& c) {
  Vec3 n = (b - a).cross(c - a);
  n.normalize();
  return {n, n.dot(a)};
}

}  // namespace

bool ConvexHull::contains(const Vec3& p, double tol) const {
  for (const Plane& pl : planes_) {
    if (pl.signed_distance(p) > tol) return false;
  }
  return true;
}

const Vec3& ConvexHull::support(const Vec3& d) const {
  std::size_t best = 0;
  double best_dot = vertices_[0].dot(d);
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    const double s = vertices_[i].dot(d);
    if (s > best_dot) {
      best_dot = s;
      best = i;
    }
  }
  return vertices_[best];
}

ConvexHull convex_hull(std::span<const Vec3> pts) {
  const int n = static_cast<int>(pts.size());
  if (n < 4) throw Error(ErrorCode::DegenerateGeometry, "hull needs at least 4 points");
  const Aabb box = bounding_box(pts);
  const double scale = std::max(box.extents().maxCoeff(), 1e-300);
  const double eps = 1e-10 * scale;

  // initial tetrahedron from extreme points
  int i0 = 0;
  for (int i = 1; i < n; ++i) {
    if (pts[i].x() < pts[i0].x()) i0 = i;
  }
  int i1 = -1;
  double best = -1;
  for (int i = 0; i < n; ++i) {
    const double d = (pts[i] - pts[i0]).squaredNorm();
    if (d > best) best = d, i1 = i;
  }
  if (std::sqrt(best) <= 1e-9 * scale || best <= 0) {
    throw Error(ErrorCode::DegenerateGeometry, "coincident points");
  }
  const Vec3 axis = (pts[i1] - pts[i0]).normalized();
  int i2 = -1;
  best = -1;
  for (int i = 0; i < n; ++i) {
    const Vec3 r = pts[i] - pts[i0];
    const double d = (r - r.dot(axis) * axis).norm();
    if (d > best) best = d, i2 = i;
  }
  if (best <= 1e-9 * scale) throw Error(ErrorCode::DegenerateGeometry, "collinear points");
  const Plane base = plane_through(pts[i0], pts[i1], pts[i2]);
  int i3 = -1;
  best = -1;
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(base.signed_distance(pts[i]));
    if (d > best) best = d, i3 = i;
  }
  if (best <= 1e-9 * scale) throw Error(ErrorCode::DegenerateGeometry, "coplanar points");

  const Vec3 inside = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) / 4.0;
  std::vector<Face> faces;
  auto add_face = [&](int a, int b, int c) {
    Plane pl = plane_through(pts[a], pts[b], pts[c]);
    if (pl.signed_distance(inside) > 0) {
      std::swap(b, c);
      pl = plane_through(pts[a], pts[b], pts[c]);
    }
    faces.push_back({{a, b, c}, pl, true});
  };
  add_face(i0, i1, i2);
  add_face(i0, i1, i3);
  add_face(i0, i2, i3);
  add_face(i1, i2, i3);

  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<int> visible;
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      if (faces[f].alive && faces[f].plane.signed_distance(pts[p]) > eps) visible.push_back(f);
    }
    if (visible.empty()) continue;
    std::set<std::pair<int, int>> edges;
    for (int f : visible) {
      const auto& v = faces[f].v;
      for (int e = 0; e < 3; ++e) edges.insert({v[e], v[(e + 1) % 3]});
      faces[f].alive = false;
    }
    for (const auto& [a, b] : edges) {
      if (edges.count({b, a})) continue;
      // horizon edge keeps its direction so the new face stays outward
      Plane pl = plane_through(pts[a], pts[b], pts[p]);
      faces.push_back({{a, b, p}, pl, true});
    }
  }

  ConvexHull hull;
  std::map<int, int> remap;
  for (const Face& f : faces) {
    if (!f.alive) continue;
    std::array<int, 3> t{};
    for (int e = 0; e < 3; ++e) {
      auto [it, inserted] = remap.emplace(f.v[e], static_cast<int>(remap.size()));
      t[e] = it->second;
    }
    hull.triangles_.push_back(t);
    hull.planes_.push_back(f.plane);
  }
  hull.vertices_.resize(remap.size());
  for (const auto& [src, dst] : remap) hull.vertices_[dst] = pts[src];
  for (const Vec3& v : hull.vertices_) hull.radius_ = std::max(hull.radius_, v.norm());

  const double normal_tol = 1e-9;
  for (std::size_t i = 0; i < hull.triangles_.size(); ++i) {
    const Plane& pl = hull.planes_[i];
    const auto& t = hull.triangles_[i];
    const double area = 0.5 * (hull.vertices_[t[1]] - hull.vertices_[t[0]])
                                  .cross(hull.vertices_[t[2]] - hull.vertices_[t[0]])
                                  .norm();
    bool found = false;
    for (Facet& f : hull.facets_) {
      if ((f.plane.normal - pl.normal).norm() < normal_tol &&
          std::abs(f.plane.offset - pl.offset) < 1e-9 * scale) {
        f.area += area;
        found = true;
        break;
      }
    }
    if (!found) hull.facets_.push_back({pl, area});
  }
  return hull;
}

}  // namespace partforge::geom
