#pragma once

#include <span>

#include "partforge/geom/hull.hpp"
#include "partforge/geom/mesh.hpp"

namespace partforge::geom {

/// Gap at or below which two shapes count as touching.
inline constexpr double kContactTolerance = 1e-6;

/// Convex hull of `points` placed by `pose`. Non-owning.
struct ConvexShape {
  std::span<const Vec3> points;
  Rigid pose;
  /// Bounding radius of `points` about the local origin; 0 disables sphere culling.
  double radius = 0;

  ConvexShape(std::span<const Vec3> pts, const Rigid& p, double r = 0)
      : points(pts), pose(p), radius(r) {}
  ConvexShape(const ConvexHull& hull, const Rigid& p)
      : points(hull.vertices()), pose(p), radius(hull.radius()) {}

  Vec3 support(const Vec3& world_dir) const;
};

struct DistanceResult {
  double distance = 0;  // 0 when touching or penetrating
  Vec3 point_a = Vec3::Zero();
  Vec3 point_b = Vec3::Zero();
};

DistanceResult distance(const ConvexShape& a, const ConvexShape& b);
/// distance(a, b) <= tol, with early exits.
bool intersect(const ConvexShape& a, const ConvexShape& b, double tol = kContactTolerance);

DistanceResult min_distance(const ConvexHull& a, const Pose6D& pa, const ConvexHull& b,
                            const Pose6D& pb);
bool collide(const ConvexHull& a, const Pose6D& pa, const ConvexHull& b, const Pose6D& pb);

/// Mesh forms hull both inputs first.
DistanceResult min_distance(const TriMesh& a, const Pose6D& pa, const TriMesh& b,
                            const Pose6D& pb);
bool collide(const TriMesh& a, const Pose6D& pa, const TriMesh& b, const Pose6D& pb);

/// Lowest world z of the shape.
double min_height(const ConvexShape& s);

}  // namespace partforge::geom
