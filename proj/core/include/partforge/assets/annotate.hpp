#pragma once

#include <utility>
#include <vector>

#include "partforge/assets/chair.hpp"
#include "partforge/geom/pose.hpp"

namespace partforge::assets {

/// Shifts the mesh so its volume centroid is the origin; returns the shift.
/// Throws DegenerateGeometry on zero volume.
std::pair<geom::TriMesh, Vec3> recenter_to_com(const geom::TriMesh& mesh);

/// Unit vector perpendicular to n: the first basis axis with |e.n| < 0.9,
/// with its n component removed.
Vec3 tangent_for(const Vec3& n);

/// Adds one mutual connection point per part pair closer than 5 mm in the
/// assembled configuration and fills gt_adjacency. Throws TooManyConnections.
void detect_connections(ChairAsset& chair, int max_connections = kMaxConnectionsPerPart);

/// Symmetric Chamfer distance; stops early once it provably reaches `limit`.
double chamfer_below(const geom::PointCloud& a, const geom::PointCloud& b, double limit);

/// The 24 proper rotations that map coordinate axes onto coordinate axes.
const std::vector<geom::Mat3>& cube_rotations();

/// Labels parts whose sampled clouds match under some cube rotation;
/// labels numbered by first appearance.
std::vector<int> compute_equivalence_classes(const ChairAsset& chair);

std::array<GraspRegion, 2> generate_grasp_regions(const Part& part);

/// Connections, equivalence classes and grasp regions in one pass.
void annotate_chair(ChairAsset& chair, int max_connections = kMaxConnectionsPerPart);

}  // namespace partforge::assets
