#pragma once

#include <vector>

#include "partforge/assets/chair.hpp"
#include "partforge/planner/rrt_connect.hpp"

namespace partforge::planner {

/// Assembled configuration moved rigidly so its parts rest on the ground and
/// its xy centroid matches that of the initial part positions.
std::vector<geom::Pose6D> assembly_goal(const assets::ChairAsset& chair,
                                        const std::vector<geom::Pose6D>& initial);

/// Moves all parts at once in the 6M-dimensional product space; validity is
/// pairwise separation plus ground clearance.
PlanOutcome plan_full_assembly(const assets::ChairAsset& chair,
                               const std::vector<geom::Pose6D>& initial, const RrtParams& params);

}  // namespace partforge::planner
