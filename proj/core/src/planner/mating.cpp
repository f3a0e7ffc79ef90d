#include "partforge/planner/mating.hpp"

#include <cmath>

namespace partforge::planner {

namespace {

bool above_ground(const geom::ConvexHull& hull, const geom::Rigid& pose) {
  if (pose.t.z() - hull.radius() >= -geom::kContactTolerance) return true;
  return geom::min_height(geom::ConvexShape(hull, pose)) >= -geom::kContactTolerance;
}

}  // namespace

Config to_config(const geom::Pose6D& p) { return {p.tx, p.ty, p.tz, p.rx, p.ry, p.rz}; }

geom::Pose6D to_pose(std::span<const double> b) { return {b[0], b[1], b[2], b[3], b[4], b[5]}; }

bool scene_valid(const MatingScene& scene, std::span<const double> anchor) {
  const geom::Rigid base(to_pose(anchor));
  for (const Body& m : scene.moving) {
    const geom::Rigid pose = base * m.pose;
    if (scene.ground && !above_ground(*m.hull, pose)) return false;
    const geom::ConvexShape shape(*m.hull, pose);
    for (const Body& o : scene.obstacles) {
      if (geom::intersect(shape, geom::ConvexShape(*o.hull, o.pose))) return false;
    }
  }
  return true;
}

PlanOutcome plan_mating(const MatingScene& scene, const geom::Pose6D& start,
                        const geom::Pose6D& target, const RrtParams& params) {
  ConfigSpace space = make_rigid_space(
      1, kWorkspaceLo, kWorkspaceHi,
      [&scene](std::span<const double> q) { return scene_valid(scene, q); });
  const Config a = to_config(start), b = to_config(target);
  if (!space.is_valid(a) || !space.is_valid(b)) return {};
  return rrt_connect(space, a, b, params);
}

}  // namespace partforge::planner
