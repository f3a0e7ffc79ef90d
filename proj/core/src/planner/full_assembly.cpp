#include "partforge/planner/full_assembly.hpp"

#include <algorithm>
#include <cmath>

#include "partforge/common/error.hpp"
#include "partforge/geom/collision.hpp"
#include "partforge/planner/mating.hpp"

namespace partforge::planner {

std::vector<geom::Pose6D> assembly_goal(const assets::ChairAsset& chair,
                                        const std::vector<geom::Pose6D>& initial) {
  const int n = chair.part_count();
  geom::Vec3 shift = geom::Vec3::Zero();
  double min_z = INFINITY;
  for (int i = 0; i < n; ++i) {
    shift.x() += initial[i].tx - chair.gt_poses[i].tx;
    shift.y() += initial[i].ty - chair.gt_poses[i].ty;
    min_z = std::min(min_z, geom::min_height(geom::ConvexShape(chair.parts[i].hull,
                                                               geom::Rigid(chair.gt_poses[i]))));
  }
  shift /= n;
  shift.z() = -min_z;
  std::vector<geom::Pose6D> goal;
  for (int i = 0; i < n; ++i) {
    geom::Pose6D p = chair.gt_poses[i];
    p.tx += shift.x();
    p.ty += shift.y();
    p.tz += shift.z();
    goal.push_back(p);
  }
  return goal;
}

PlanOutcome plan_full_assembly(const assets::ChairAsset& chair,
                               const std::vector<geom::Pose6D>& initial, const RrtParams& params) {
  const int n = chair.part_count();
  if (static_cast<int>(initial.size()) != n) {
    throw Error(ErrorCode::InvalidQuery, "one initial pose per part required");
  }
  const std::vector<geom::Pose6D> goal_poses = assembly_goal(chair, initial);
  Config start, goal;
  for (int i = 0; i < n; ++i) {
    const Config a = to_config(initial[i]), b = to_config(goal_poses[i]);
    start.insert(start.end(), a.begin(), a.end());
    goal.insert(goal.end(), b.begin(), b.end());
  }
  if (n == 1) {
    // a lone part is already assembled wherever it lies
    PlanOutcome out;
    out.found = true;
    out.path = {start};
    return out;
  }

  auto valid = [&chair, n](std::span<const double> q) {
    std::vector<geom::Rigid> poses;
    poses.reserve(n);
    for (int i = 0; i < n; ++i) {
      poses.emplace_back(to_pose(q.subspan(6 * i, 6)));
      const geom::ConvexHull& h = chair.parts[i].hull;
      if (poses[i].t.z() - h.radius() < -geom::kContactTolerance &&
          geom::min_height(geom::ConvexShape(h, poses[i])) < -geom::kContactTolerance) {
        return false;
      }
    }
    for (int i = 0; i < n; ++i) {
      const geom::ConvexShape a(chair.parts[i].hull, poses[i]);
      for (int j = i + 1; j < n; ++j) {
        if (geom::intersect(a, geom::ConvexShape(chair.parts[j].hull, poses[j]))) return false;
      }
    }
    return true;
  };
  const ConfigSpace space = make_rigid_space(n, kWorkspaceLo, kWorkspaceHi, valid);
  if (!space.is_valid(start) || !space.is_valid(goal)) return {};
  return rrt_connect(space, start, goal, params);
}

}  // namespace partforge::planner
