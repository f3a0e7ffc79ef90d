#pragma once

#include <vector>

#include "partforge/geom/collision.hpp"
#include "partforge/planner/rrt_connect.hpp"

namespace partforge::planner {

inline constexpr double kWorkspaceLo[3] = {-3.5, -3.5, 0.0};
inline constexpr double kWorkspaceHi[3] = {3.5, 3.5, 2.5};

/// A hull at a fixed transform: relative to the moving anchor for moving
/// bodies, in world coordinates for obstacles.
struct Body {
  const geom::ConvexHull* hull = nullptr;
  geom::Rigid pose;
};

struct MatingScene {
  std::vector<Body> moving;
  std::vector<Body> obstacles;
  bool ground = true;
};

/// True when the moving bodies placed by `anchor` are clear of every
/// obstacle and, if enabled, do not dip below z = 0 (tolerance 1e-6).
bool scene_valid(const MatingScene& scene, std::span<const double> anchor);

/// 6-dof query for the moving rigid group. An invalid start or target gives
/// NoPath with zero attempted states.
PlanOutcome plan_mating(const MatingScene& scene, const geom::Pose6D& start,
                        const geom::Pose6D& target, const RrtParams& params);

Config to_config(const geom::Pose6D& p);
geom::Pose6D to_pose(std::span<const double> block);

}  // namespace partforge::planner
