#pragma once

#include <optional>
#include <string>
#include <vector>

#include "partforge/env/actions.hpp"
#include "partforge/env/state.hpp"
#include "partforge/planner/rrt_connect.hpp"

namespace partforge::env {

enum class Failure { None, InvalidSelection, NoMatingPath, GraspInfeasible };
std::string to_string(Failure f);

enum class Setting { ObjectCentric, Full };
std::string to_string(Setting s);
/// Accepts "oc" and "full". Throws ConfigError.
Setting parse_setting(const std::string& name);

struct StepParams {
  planner::RrtParams planner;
  Setting setting = Setting::ObjectCentric;
};

struct StepResult {
  AssemblyState next_state;
  double reward = 0;
  bool done = false;
  Failure failure = Failure::None;
  /// Attempted states of the mating query, 0 when no query ran.
  std::int64_t plan_states = 0;
};

/// Unit vector for orientation id w: +x, -x, +y, -y, +z, -z.
geom::Vec3 orientation_axis(int w);

/// Smallest rotation taking unit a onto unit b; antiparallel inputs turn by
/// pi about `fallback_axis`.
geom::Mat3 minimal_rotation(const geom::Vec3& a, const geom::Vec3& b,
                            const geom::Vec3& fallback_axis);

/// Rotates v's group so its assembled +z points along axis w, about the
/// centroid of the member positions, then drops it to the ground. If it then
/// overlaps another group it is moved to the nearest free xy within 1 m.
/// Returns nullopt when no free spot exists.
std::optional<AssemblyState> apply_reorientation(const AssemblyState& s, int v, int w);

/// Object-centric step: verify, reorient v, plan u's group onto the target,
/// merge and settle. Rewards 1 per merge, 5 for the final one.
StepResult step_oc(const AssemblyState& s, const ActionOC& a, const StepParams& params);

/// Corners of the gripper box swept from 0.3 m out along the approach
/// direction down to the grasp region (16 points, world frame).
std::vector<geom::Vec3> gripper_sweep(const AssemblyState& s, int part, int grasp);

/// Swept gripper clear of every other part and of the ground.
bool grasp_feasible(const AssemblyState& s, int part, int grasp);

/// Full-setting step with abstract grippers: grasp checks replace the w
/// reorientation, and v's group is held at a hand-off pose 0.5 m up.
StepResult step_full_abstract(const AssemblyState& s, const ActionFull& a,
                              const StepParams& params);

/// Trailing action count of a setting: orientations, or grasp pairs.
int trailing_count(Setting s);

/// Decodes a padded action index for params.setting and runs the matching
/// step. Throws CapMismatch when caps.orientations does not fit the setting.
StepResult step_action(const AssemblyState& s, const ActionCaps& caps, std::int64_t action,
                       const StepParams& params);

}  // namespace partforge::env
