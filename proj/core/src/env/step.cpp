#include "partforge/env/step.hpp"

#include <cmath>

#include "group_ops.hpp"
#include "partforge/common/error.hpp"
#include "partforge/common/rng.hpp"
#include "partforge/geom/collision.hpp"
#include "partforge/geom/hull.hpp"
#include "partforge/planner/mating.hpp"

namespace partforge::env {

using geom::Mat3;
using geom::Rigid;
using geom::Vec3;

std::string to_string(Failure f) {
  switch (f) {
    case Failure::None: return "none";
    case Failure::InvalidSelection: return "invalid_selection";
    case Failure::NoMatingPath: return "no_mating_path";
    case Failure::GraspInfeasible: return "grasp_infeasible";
  }
  return "unknown";
}

Vec3 orientation_axis(int w) {
  Vec3 d = Vec3::Zero();
  d(w / 2) = (w % 2 == 0) ? 1.0 : -1.0;
  return d;
}

Mat3 minimal_rotation(const Vec3& a, const Vec3& b, const Vec3& fallback_axis) {
  const Vec3 an = a.normalized(), bn = b.normalized();
  const double c = an.dot(bn);
  if (c < -1.0 + 1e-12) {
    Vec3 axis = fallback_axis - fallback_axis.dot(an) * an;
    if (axis.norm() < 1e-9) axis = an.unitOrthogonal();
    return Eigen::AngleAxisd(M_PI, axis.normalized()).toRotationMatrix();
  }
  return Eigen::Quaterniond::FromTwoVectors(an, bn).toRotationMatrix();
}

namespace {

// Rotates the parts by `rot` about their translation centroid.
void rotate_about_centroid(AssemblyState& s, const std::vector<int>& parts, const Mat3& rot) {
  const Vec3 c = detail::centroid(s, parts);
  detail::move_parts(s, parts, Rigid(rot, c - rot * c));
}

// Orientation of v's group relative to its assembled frame.
Mat3 group_frame(const AssemblyState& s, int v) {
  return s.poses[v].rotation() * s.chair->gt_poses[v].rotation().transpose();
}

StepResult failed(AssemblyState next, Failure f) {
  StepResult r{std::move(next)};
  r.failure = f;
  r.done = true;
  return r;
}

// Plans u's group onto the target, merges and settles on the ground.
StepResult mate_and_merge(AssemblyState next, int u, int u_sub, int k, int v, int l,
                          const StepParams& params) {
  const auto& parts = next.chair->parts;
  const std::vector<int> moving = next.members(u);
  const Rigid anchor(next.poses[u]);
  const Rigid anchor_inv = anchor.inverse();

  planner::MatingScene scene;
  for (int x : moving) {
    scene.moving.push_back({&parts[x].hull, anchor_inv * Rigid(next.poses[x])});
  }
  for (int y = 0; y < next.part_count(); ++y) {
    if (next.group[y] != next.group[u]) {
      scene.obstacles.push_back({&parts[y].hull, Rigid(next.poses[y])});
    }
  }
  const Pose6D target = mating_target_pose(next, u_sub, v);
  planner::RrtParams rp = params.planner;
  rp.seed = mix_seed(params.planner.seed, static_cast<std::uint64_t>(next.step_count));
  const planner::PlanOutcome plan = planner::plan_mating(scene, next.poses[u], target, rp);
  if (!plan.found) {
    StepResult r = failed(std::move(next), Failure::NoMatingPath);
    r.plan_states = plan.states_attempted;
    return r;
  }

  const Rigid motion = Rigid(target) * anchor_inv;
  detail::move_parts(next, moving, motion);
  next.poses[u] = target;
  detail::merge_groups(next, u, k, v, l);

  const std::vector<int> merged = next.members(u);
  const AssemblyState unsettled = next;
  detail::lift_to(next, merged, 0.0);
  if (!detail::resolve_overlap(next, merged)) next = unsettled;

  StepResult r{std::move(next)};
  r.plan_states = plan.states_attempted;
  if (is_fully_assembled(r.next_state)) {
    r.reward = 5;
    r.done = true;
  } else {
    r.reward = 1;
    ActionCaps uncapped{r.next_state.part_count(), assets::kMaxConnectionsPerPart, 1};
    r.done = valid_selections(r.next_state, uncapped).empty();
  }
  return r;
}

}  // namespace

std::optional<AssemblyState> apply_reorientation(const AssemblyState& s, int v, int w) {
  AssemblyState next = s;
  const std::vector<int> group = s.members(v);
  const Mat3 frame = group_frame(s, v);
  const Mat3 rot = minimal_rotation(frame * Vec3::UnitZ(), orientation_axis(w),
                                    frame * Vec3::UnitX());
  rotate_about_centroid(next, group, rot);
  detail::lift_to(next, group, 0.0);
  if (!detail::resolve_overlap(next, group)) return std::nullopt;
  return next;
}

StepResult step_oc(const AssemblyState& s, const ActionOC& a, const StepParams& params) {
  AssemblyState next = s;
  ++next.step_count;
  const Selection sel = verify_selection(s, a.u, a.v, a.k, a.l);
  if (!sel.valid || a.w < 0 || a.w > 5) return failed(std::move(next), Failure::InvalidSelection);

  std::optional<AssemblyState> turned = apply_reorientation(next, a.v, a.w);
  if (!turned) return failed(std::move(next), Failure::NoMatingPath);
  return mate_and_merge(std::move(*turned), a.u, sel.substituted_u, a.k, a.v, a.l, params);
}

namespace {

const Vec3 kGripperHalf{0.02, 0.01, 0.03};
constexpr double kApproachStart = 0.3;
constexpr double kHandOffHeight = 0.5;

struct GraspFrame {
  Vec3 center;     // world
  Vec3 direction;  // world, pointing away from the part
  Vec3 long_axis;  // world
  double depth;    // region half extent along the direction
};

GraspFrame grasp_frame(const AssemblyState& s, int part, int grasp) {
  const assets::GraspRegion& g = s.chair->parts[part].grasp_regions[grasp / 4];
  const Vec3 d_local = g.approach_dirs[grasp % 4];
  const Rigid pose(s.poses[part]);
  const Vec3 long_local = g.approach_dirs[0].cross(g.approach_dirs[2]);
  return {pose * g.center, pose.r * d_local, pose.r * long_local,
          std::abs(g.half_extents.dot(d_local))};
}

}  // namespace

std::vector<Vec3> gripper_sweep(const AssemblyState& s, int part, int grasp) {
  const GraspFrame f = grasp_frame(s, part, grasp);
  const Vec3 z = f.direction;
  const Vec3 x = f.long_axis;
  const Vec3 y = z.cross(x);
  std::vector<Vec3> out;
  out.reserve(16);
  for (double reach : {kApproachStart, f.depth + kGripperHalf.z()}) {
    const Vec3 c = f.center + reach * z;
    for (int i = 0; i < 8; ++i) {
      out.push_back(c + ((i & 1) ? 1 : -1) * kGripperHalf.x() * x +
                    ((i & 2) ? 1 : -1) * kGripperHalf.y() * y +
                    ((i & 4) ? 1 : -1) * kGripperHalf.z() * z);
    }
  }
  return out;
}

bool grasp_feasible(const AssemblyState& s, int part, int grasp) {
  const std::vector<Vec3> sweep = gripper_sweep(s, part, grasp);
  for (const Vec3& p : sweep) {
    if (p.z() < -geom::kContactTolerance) return false;
  }
  const geom::ConvexShape tool(sweep, Rigid());
  for (int y = 0; y < s.part_count(); ++y) {
    if (y == part) continue;
    if (geom::intersect(tool, geom::ConvexShape(s.chair->parts[y].hull, Rigid(s.poses[y])))) {
      return false;
    }
  }
  return true;
}

StepResult step_full_abstract(const AssemblyState& s, const ActionFull& a,
                              const StepParams& params) {
  AssemblyState next = s;
  ++next.step_count;
  const Selection sel = verify_selection(s, a.u, a.v, a.k, a.l);
  if (!sel.valid || a.g_a < 0 || a.g_a >= kGraspChoices || a.g_b < 0 ||
      a.g_b >= kGraspChoices) {
    return failed(std::move(next), Failure::InvalidSelection);
  }
  if (!grasp_feasible(s, a.u, a.g_a) || !grasp_feasible(s, a.v, a.g_b)) {
    return failed(std::move(next), Failure::GraspInfeasible);
  }

  // Hand-off: v's group is turned so the gripper holds it from above, then
  // raised clear of the ground.
  const std::vector<int> held = next.members(a.v);
  const GraspFrame f = grasp_frame(next, a.v, a.g_b);
  rotate_about_centroid(next, held, minimal_rotation(f.direction, Vec3::UnitZ(), f.long_axis));
  detail::lift_to(next, held, kHandOffHeight);
  if (!detail::resolve_overlap(next, held)) return failed(std::move(next), Failure::NoMatingPath);

  return mate_and_merge(std::move(next), a.u, sel.substituted_u, a.k, a.v, a.l, params);
}

std::string to_string(Setting s) { return s == Setting::Full ? "full" : "oc"; }

Setting parse_setting(const std::string& name) {
  if (name == "oc") return Setting::ObjectCentric;
  if (name == "full") return Setting::Full;
  throw Error(ErrorCode::ConfigError, "unknown setting '" + name + "' (expected oc or full)");
}

int trailing_count(Setting s) { return s == Setting::Full ? kGraspChoices * kGraspChoices : 6; }

StepResult step_action(const AssemblyState& s, const ActionCaps& caps, std::int64_t action,
                       const StepParams& params) {
  if (caps.orientations != trailing_count(params.setting)) {
    throw Error(ErrorCode::CapMismatch, "action caps do not match the " +
                                            to_string(params.setting) + " setting");
  }
  if (params.setting == Setting::Full) return step_full_abstract(s, decode_full(caps, action), params);
  return step_oc(s, decode_oc(caps, action), params);
}

}  // namespace partforge::env
