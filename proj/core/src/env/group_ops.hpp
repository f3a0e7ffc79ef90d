#pragma once

#include <vector>

#include "partforge/env/state.hpp"

namespace partforge::env::detail {

/// Applies `motion` (world frame) to every listed part.
void move_parts(AssemblyState& s, const std::vector<int>& parts, const geom::Rigid& motion);

/// Translates the parts vertically so their lowest point sits at `height`.
void lift_to(AssemblyState& s, const std::vector<int>& parts, double height);

/// Mean of the members' translations.
geom::Vec3 centroid(const AssemblyState& s, const std::vector<int>& parts);

/// If the parts overlap another group, shifts them to the nearest free xy
/// offset on rings 50 mm apart out to 1 m. Returns false when none is free.
bool resolve_overlap(AssemblyState& s, const std::vector<int>& parts);

/// Joins the groups of u and v, records the tensor entry for (u, v), marks
/// slots k and l used, and records any other ground-truth contacts that the
/// merge closed to within the connection threshold.
void merge_groups(AssemblyState& s, int u, int k, int v, int l);

}  // namespace partforge::env::detail
