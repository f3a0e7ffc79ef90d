#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "partforge/assets/chair.hpp"
#include "partforge/geom/pose.hpp"

namespace partforge::env {

using assets::ChairAsset;
using geom::Pose6D;

/// Dense M x M x 6 tensor of relative poses C(u, v) = inv(T_u) * T_v for
/// connected pairs, zero elsewhere.
class ConnectionTensor {
 public:
  ConnectionTensor() = default;
  explicit ConnectionTensor(int parts);

  int parts() const { return parts_; }
  bool connected(int u, int v) const { return flags_[u * parts_ + v] != 0; }
  Pose6D at(int u, int v) const;
  /// Writes C(u, v) = rel and C(v, u) = invert(rel).
  void connect(int u, int v, const Pose6D& rel);
  const std::vector<double>& values() const { return values_; }

  bool operator==(const ConnectionTensor&) const = default;

 private:
  int parts_ = 0;
  std::vector<double> values_;
  std::vector<char> flags_;
};

struct AssemblyState {
  std::shared_ptr<const ChairAsset> chair;
  std::vector<Pose6D> poses;
  ConnectionTensor tensor;
  /// Group label per part: the smallest part id in its rigid group.
  std::vector<int> group;
  /// used[x][k]: connection k of part x has been consumed by a merge.
  std::vector<std::vector<char>> used;
  int step_count = 0;

  int part_count() const { return static_cast<int>(poses.size()); }
  int group_count() const;
  std::vector<int> members(int part) const;
  bool same_group(int a, int b) const { return group[a] == group[b]; }
};

/// Parts laid flat on their largest hull face with random yaw inside a
/// 4 m x 4 m square, at least 50 mm apart. Throws PlacementFailed.
AssemblyState reset(std::shared_ptr<const ChairAsset> chair, std::uint64_t seed);

/// Parts in u's equivalence class, u included, ascending.
std::vector<int> equivalence_set(const AssemblyState& s, int u);

struct Selection {
  bool valid = false;
  int substituted_u = -1;
};

/// Ground-truth check of (u, v, k, l) with symmetric substitution of u.
Selection verify_selection(const AssemblyState& s, int u, int v, int k, int l);

/// Pose placing the moving part where u_sub sits relative to v in the
/// assembled chair: T_v,now * inv(T_v,gt) * T_usub,gt.
Pose6D mating_target_pose(const AssemblyState& s, int u_sub, int v);

/// One rigid group whose tensor covers the ground-truth adjacency, counted
/// per pair of equivalence classes so symmetric substitutions count.
bool is_fully_assembled(const AssemblyState& s);

/// Lowest z over the hulls of the given parts.
double lowest_point(const AssemblyState& s, const std::vector<int>& parts);

/// True when any part of `parts` is within `tol` of a part outside it.
bool group_collides(const AssemblyState& s, const std::vector<int>& parts,
                    double tol = 1e-6);

}  // namespace partforge::env
