#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace partforge::planner {

/// A configuration is a sequence of rigid-body blocks
/// [tx, ty, tz, rx, ry, rz], translations in meters, Euler angles in radians.
using Config = std::vector<double>;

struct ConfigSpace {
  int dimension = 6;
  std::vector<double> lower;
  std::vector<double> upper;
  std::function<bool(std::span<const double>)> is_valid;

  int blocks() const { return dimension / 6; }
  /// Throws InvalidQuery when the shape or bounds are malformed.
  void check() const;
};

/// Box of translation bounds shared by every block; angles span [-pi, pi].
ConfigSpace make_rigid_space(int bodies, const double (&lo)[3], const double (&hi)[3],
                             std::function<bool(std::span<const double>)> is_valid);

struct Resolution {
  double translation = 0.005;
  double rotation = 0.05;
};

struct RrtParams {
  double step_translation = 0.05;
  double step_rotation = 0.2;
  double goal_bias = 0.05;
  std::int64_t max_states = 100000;
  Resolution resolution;
  std::uint64_t seed = 0;
};

struct PlanOutcome {
  bool found = false;
  std::vector<Config> path;  // start ... goal when found
  std::int64_t states_attempted = 0;
};

/// Straight-line interpolation; translations linear, each angle along its
/// shortest arc. s = 1 returns b exactly.
Config interpolate(std::span<const double> a, std::span<const double> b, double s);

/// Largest per-block translation and rotation change from a to b.
struct BlockDelta {
  double translation = 0;
  double rotation = 0;
};
BlockDelta max_block_delta(std::span<const double> a, std::span<const double> b);

/// Validity at evenly spaced points no further apart than the resolution,
/// both endpoints included.
bool check_motion(const ConfigSpace& space, std::span<const double> a, std::span<const double> b,
                  const Resolution& resolution);

/// Bidirectional RRT with the connect heuristic. Every generated extension
/// configuration counts as one attempted state; the search stops with NoPath
/// exactly when max_states have been attempted. Throws InvalidQuery if the
/// start or goal is invalid. Returned paths pass check_motion at half the
/// configured resolution.
PlanOutcome rrt_connect(const ConfigSpace& space, const Config& start, const Config& goal,
                        const RrtParams& params);

}  // namespace partforge::planner
