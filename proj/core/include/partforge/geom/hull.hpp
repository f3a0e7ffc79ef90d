#pragma once

#include <array>
#include <span>
#include <vector>

#include "partforge/geom/mesh.hpp"

namespace partforge::geom {

struct Plane {
  Vec3 normal;  // unit, outward
  double offset = 0;  // normal . x = offset on the plane
  double signed_distance(const Vec3& x) const { return normal.dot(x) - offset; }
};

/// Coplanar hull triangles merged into one polygonal face.
struct Facet {
  Plane plane;
  double area = 0;
};

class ConvexHull {
 public:
  ConvexHull() = default;

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<Plane>& planes() const { return planes_; }
  const std::vector<Facet>& facets() const { return facets_; }
  /// Max vertex norm; a bounding sphere about the local origin.
  double radius() const { return radius_; }

  bool contains(const Vec3& p, double tol = 1e-9) const;
  /// Vertex maximizing d . x.
  const Vec3& support(const Vec3& d) const;
  TriMesh to_mesh() const { return {vertices_, triangles_}; }

  friend ConvexHull convex_hull(std::span<const Vec3> points);

 private:
  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Plane> planes_;
  std::vector<Facet> facets_;
  double radius_ = 0;
};

/// Throws DegenerateGeometry for fewer than 4 non-coplanar points.
ConvexHull convex_hull(std::span<const Vec3> points);
inline ConvexHull convex_hull(const TriMesh& mesh) { return convex_hull(mesh.vertices); }

}  // namespace partforge::geom
