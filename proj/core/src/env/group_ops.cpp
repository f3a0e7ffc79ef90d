#include "group_ops.hpp"

#include <cmath>
#include <limits>

#include "partforge/assets/chair.hpp"
#include "partforge/geom/collision.hpp"

namespace partforge::env::detail {

void move_parts(AssemblyState& s, const std::vector<int>& parts, const geom::Rigid& motion) {
  for (int x : parts) s.poses[x] = (motion * geom::Rigid(s.poses[x])).pose();
}

void lift_to(AssemblyState& s, const std::vector<int>& parts, double height) {
  const double dz = height - lowest_point(s, parts);
  for (int x : parts) s.poses[x].tz += dz;
}

geom::Vec3 centroid(const AssemblyState& s, const std::vector<int>& parts) {
  geom::Vec3 c = geom::Vec3::Zero();
  for (int x : parts) c += s.poses[x].t();
  return c / static_cast<double>(parts.size());
}

bool resolve_overlap(AssemblyState& s, const std::vector<int>& parts) {
  if (!group_collides(s, parts)) return true;
  constexpr double kRing = 0.05;
  constexpr double kReach = 1.0;
  const std::vector<Pose6D> original = s.poses;
  for (int ring = 1; ring * kRing <= kReach + 1e-12; ++ring) {
    const double r = ring * kRing;
    const int n = static_cast<int>(std::ceil(2 * M_PI * r / kRing));
    for (int i = 0; i < n; ++i) {
      const double a = 2 * M_PI * i / n;
      for (int x : parts) {
        s.poses[x].tx = original[x].tx + r * std::cos(a);
        s.poses[x].ty = original[x].ty + r * std::sin(a);
      }
      if (!group_collides(s, parts)) return true;
    }
  }
  s.poses = original;
  return false;
}

namespace {

// Unused slot of `x` whose mate has y's class and whose world position is
// nearest `near`; -1 if none.
int nearest_slot(const AssemblyState& s, int x, int y, const geom::Vec3& near) {
  const auto& parts = s.chair->parts;
  const geom::Rigid pose(s.poses[x]);
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < static_cast<int>(parts[x].connections.size()); ++k) {
    const assets::ConnectionPoint& c = parts[x].connections[k];
    if (s.used[x][k] ||
        parts[c.mate_part].equivalence_class != parts[y].equivalence_class) {
      continue;
    }
    const double d = (pose * c.position - near).norm();
    if (d < best_d) best_d = d, best = k;
  }
  return best;
}

void record(AssemblyState& s, int a, int b) {
  s.tensor.connect(a, b, (geom::Rigid(s.poses[a]).inverse() * geom::Rigid(s.poses[b])).pose());
}

}  // namespace

void merge_groups(AssemblyState& s, int u, int k, int v, int l) {
  const std::vector<int> side_u = s.members(u);
  const std::vector<int> side_v = s.members(v);

  record(s, u, v);
  s.used[u][k] = 1;
  s.used[v][l] = 1;

  for (int x : side_u) {
    const geom::ConvexShape sx(s.chair->parts[x].hull, geom::Rigid(s.poses[x]));
    for (int y : side_v) {
      if ((x == u && y == v) || s.tensor.connected(x, y)) continue;
      const geom::DistanceResult d = geom::distance(
          sx, geom::ConvexShape(s.chair->parts[y].hull, geom::Rigid(s.poses[y])));
      if (d.distance >= assets::kConnectionThreshold) continue;
      const geom::Vec3 mid = 0.5 * (d.point_a + d.point_b);
      const int kx = nearest_slot(s, x, y, mid);
      const int ly = nearest_slot(s, y, x, mid);
      if (kx < 0 || ly < 0) continue;
      record(s, x, y);
      s.used[x][kx] = 1;
      s.used[y][ly] = 1;
    }
  }

  const int label = std::min(s.group[u], s.group[v]);
  for (int x : side_u) s.group[x] = label;
  for (int y : side_v) s.group[y] = label;
}

}  // namespace partforge::env::detail
