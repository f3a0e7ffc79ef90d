#pragma once

#include <array>
#include <vector>

#include "partforge/geom/pose.hpp"

namespace partforge::geom {

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;

  bool operator==(const TriMesh&) const = default;
};

/// Axis-aligned box centered at `center`.
TriMesh make_box(const Vec3& half_extents, const Vec3& center = Vec3::Zero());
/// Cylinder along z, centered at `center`, tessellated with `segments` sides.
TriMesh make_cylinder(double radius, double half_height, const Vec3& center = Vec3::Zero(),
                      int segments = 24);

TriMesh transformed(const TriMesh& mesh, const Pose6D& pose);
TriMesh translated(const TriMesh& mesh, const Vec3& offset);
/// Concatenation; no vertex welding.
TriMesh merged(const TriMesh& a, const TriMesh& b);

double triangle_area(const TriMesh& mesh, std::size_t tri);
double surface_area(const TriMesh& mesh);
/// Signed volume; positive for outward-oriented closed meshes.
double volume(const TriMesh& mesh);
/// Volume-weighted centroid. Throws DegenerateGeometry on ~zero volume.
Vec3 volume_centroid(const TriMesh& mesh);

struct Aabb {
  Vec3 lo;
  Vec3 hi;
  Vec3 extents() const { return hi - lo; }
  Vec3 center() const { return 0.5 * (lo + hi); }
};
Aabb bounding_box(std::span<const Vec3> points);

/// Indices in range and triangle areas above 1e-12.
bool is_valid(const TriMesh& mesh);
/// Every undirected edge used by exactly two triangles, in opposite directions.
bool is_watertight(const TriMesh& mesh);

}  // namespace partforge::geom
