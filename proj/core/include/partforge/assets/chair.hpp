#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "partforge/geom/hull.hpp"
#include "partforge/geom/mesh.hpp"
#include "partforge/geom/pose.hpp"

namespace partforge::assets {

using geom::Pose6D;
using geom::Vec3;

inline constexpr double kConnectionThreshold = 0.005;
inline constexpr int kMaxConnectionsPerPart = 10;
inline constexpr int kMaxPartsPerChair = 20;

/// Mating location on a part, expressed in the part's COM frame.
struct ConnectionPoint {
  Vec3 position = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();  // points from this part toward its mate
  Vec3 tangent = Vec3::UnitX();
  int mate_part = -1;
  int mate_connection = -1;

  /// position, normal, tangent
  std::array<double, 9> descriptor() const;
};

struct GraspRegion {
  Vec3 center = Vec3::Zero();
  Vec3 half_extents = Vec3::Zero();
  std::array<Vec3, 4> approach_dirs{};
};

struct Part {
  int id = 0;
  geom::TriMesh mesh;  // COM-local frame
  geom::ConvexHull hull;
  std::vector<ConnectionPoint> connections;
  std::array<GraspRegion, 2> grasp_regions{};
  int equivalence_class = 0;
};

/// Connection k of part u mates connection l of part v.
struct MatePair {
  int u = 0, k = 0, v = 0, l = 0;
  bool operator==(const MatePair&) const = default;
};

/// One merge of a known-good assembly sequence: move u onto v after
/// reorienting v's group by w.
struct AssemblyStep {
  int u = 0, v = 0, w = 4;
  bool operator==(const AssemblyStep&) const = default;
};

enum class Difficulty { Easy, Hard };
std::string to_string(Difficulty d);
Difficulty difficulty_from_string(const std::string& s);

struct ChairAsset {
  int id = 0;
  Difficulty difficulty = Difficulty::Easy;
  std::vector<Part> parts;
  std::vector<Pose6D> gt_poses;  // assembled configuration
  std::vector<MatePair> gt_adjacency;
  /// Part pairs the generator placed in contact, i < j.
  std::vector<std::pair<int, int>> designed_mates;
  std::vector<AssemblyStep> assembly_order;

  int part_count() const { return static_cast<int>(parts.size()); }
  int connection_count(int part) const {
    return static_cast<int>(parts[part].connections.size());
  }
};

}  // namespace partforge::assets
