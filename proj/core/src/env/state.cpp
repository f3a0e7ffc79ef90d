#include "partforge/env/state.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "partforge/common/error.hpp"
#include "partforge/common/rng.hpp"
#include "partforge/env/actions.hpp"
#include "partforge/env/step.hpp"
#include "partforge/geom/collision.hpp"

namespace partforge::env {

ConnectionTensor::ConnectionTensor(int parts)
    : parts_(parts),
      values_(static_cast<std::size_t>(parts) * parts * 6, 0.0),
      flags_(static_cast<std::size_t>(parts) * parts, 0) {}

Pose6D ConnectionTensor::at(int u, int v) const {
  const double* x = values_.data() + (static_cast<std::size_t>(u) * parts_ + v) * 6;
  return {x[0], x[1], x[2], x[3], x[4], x[5]};
}

void ConnectionTensor::connect(int u, int v, const Pose6D& rel) {
  auto put = [&](int a, int b, const Pose6D& p) {
    double* x = values_.data() + (static_cast<std::size_t>(a) * parts_ + b) * 6;
    x[0] = p.tx, x[1] = p.ty, x[2] = p.tz, x[3] = p.rx, x[4] = p.ry, x[5] = p.rz;
    flags_[static_cast<std::size_t>(a) * parts_ + b] = 1;
  };
  put(u, v, rel);
  put(v, u, geom::invert(rel));
}

int AssemblyState::group_count() const {
  return static_cast<int>(std::set<int>(group.begin(), group.end()).size());
}

std::vector<int> AssemblyState::members(int part) const {
  std::vector<int> out;
  for (int i = 0; i < part_count(); ++i) {
    if (group[i] == group[part]) out.push_back(i);
  }
  return out;
}

double lowest_point(const AssemblyState& s, const std::vector<int>& parts) {
  double z = INFINITY;
  for (int x : parts) {
    z = std::min(z, geom::min_height(
                        geom::ConvexShape(s.chair->parts[x].hull, geom::Rigid(s.poses[x]))));
  }
  return z;
}

bool group_collides(const AssemblyState& s, const std::vector<int>& parts, double tol) {
  std::vector<char> inside(s.part_count(), 0);
  for (int x : parts) inside[x] = 1;
  for (int x : parts) {
    const geom::ConvexShape a(s.chair->parts[x].hull, geom::Rigid(s.poses[x]));
    for (int y = 0; y < s.part_count(); ++y) {
      if (inside[y]) continue;
      if (geom::intersect(a, geom::ConvexShape(s.chair->parts[y].hull, geom::Rigid(s.poses[y])),
                          tol)) {
        return true;
      }
    }
  }
  return false;
}

AssemblyState reset(std::shared_ptr<const ChairAsset> chair, std::uint64_t seed) {
  const int n = chair->part_count();
  AssemblyState s;
  s.chair = chair;
  s.tensor = ConnectionTensor(n);
  s.group.resize(n);
  s.used.resize(n);
  for (int i = 0; i < n; ++i) {
    s.group[i] = i;
    s.used[i].assign(chair->parts[i].connections.size(), 0);
  }

  Rng rng(seed);
  std::vector<geom::Rigid> placed;
  for (int i = 0; i < n; ++i) {
    const assets::Part& part = chair->parts[i];
    const geom::Mat3 gt_rot = chair->gt_poses[i].rotation();
    const geom::Facet* rest = &part.hull.facets().front();
    for (const geom::Facet& f : part.hull.facets()) {
      if (f.area > rest->area) rest = &f;
    }
    const geom::Vec3 n_world = gt_rot * rest->plane.normal;
    const geom::Mat3 lay =
        minimal_rotation(n_world, -geom::Vec3::UnitZ(), gt_rot * geom::Vec3::UnitX()) * gt_rot;
    bool ok = false;
    for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
      const double yaw = rng.uniform(-M_PI, M_PI);
      const double x = rng.uniform(-2.0, 2.0);
      const double y = rng.uniform(-2.0, 2.0);
      const geom::Mat3 r = Eigen::AngleAxisd(yaw, geom::Vec3::UnitZ()).toRotationMatrix() * lay;
      geom::Rigid pose(r, geom::Vec3(x, y, 0));
      pose.t.z() = -geom::min_height(geom::ConvexShape(part.hull, pose));
      // Euler round trip so stored poses and collision checks agree exactly
      const Pose6D p = pose.pose();
      pose = geom::Rigid(p);
      ok = true;
      for (int j = 0; j < i && ok; ++j) {
        const geom::DistanceResult d =
            geom::distance(geom::ConvexShape(part.hull, pose),
                           geom::ConvexShape(chair->parts[j].hull, placed[j]));
        ok = d.distance >= 0.05;
      }
      if (ok) {
        placed.push_back(pose);
        s.poses.push_back(p);
      }
    }
    if (!ok) {
      throw Error(ErrorCode::PlacementFailed,
                  "could not place part " + std::to_string(i) + " after 1000 attempts");
    }
  }
  return s;
}

std::vector<int> equivalence_set(const AssemblyState& s, int u) {
  std::vector<int> out;
  const int cls = s.chair->parts[u].equivalence_class;
  for (int i = 0; i < s.part_count(); ++i) {
    if (s.chair->parts[i].equivalence_class == cls) out.push_back(i);
  }
  return out;
}

Selection verify_selection(const AssemblyState& s, int u, int v, int k, int l) {
  const int n = s.part_count();
  if (u < 0 || v < 0 || u >= n || v >= n || u == v || s.same_group(u, v)) return {};
  const auto& parts = s.chair->parts;
  if (k < 0 || l < 0 || k >= static_cast<int>(parts[u].connections.size()) ||
      l >= static_cast<int>(parts[v].connections.size())) {
    return {};
  }
  if (s.used[u][k] || s.used[v][l]) return {};
  const int u_sub = parts[v].connections[l].mate_part;
  if (parts[u_sub].equivalence_class != parts[u].equivalence_class) return {};
  if (k >= static_cast<int>(parts[u_sub].connections.size())) return {};
  if (parts[u_sub].connections[k].mate_part != v) return {};
  return {true, u_sub};
}

Pose6D mating_target_pose(const AssemblyState& s, int u_sub, int v) {
  const geom::Rigid now(s.poses[v]);
  const geom::Rigid gt_v(s.chair->gt_poses[v]);
  const geom::Rigid gt_u(s.chair->gt_poses[u_sub]);
  return (now * gt_v.inverse() * gt_u).pose();
}

bool is_fully_assembled(const AssemblyState& s) {
  if (s.group_count() != 1) return false;
  const auto& parts = s.chair->parts;
  auto key = [&](int a, int b) {
    const int ca = parts[a].equivalence_class, cb = parts[b].equivalence_class;
    return std::pair{std::min(ca, cb), std::max(ca, cb)};
  };
  std::map<std::pair<int, int>, int> need, have;
  for (const assets::MatePair& m : s.chair->gt_adjacency) ++need[key(m.u, m.v)];
  for (int a = 0; a < s.part_count(); ++a) {
    for (int b = a + 1; b < s.part_count(); ++b) {
      if (s.tensor.connected(a, b)) ++have[key(a, b)];
    }
  }
  for (const auto& [k, count] : need) {
    auto it = have.find(k);
    if (it == have.end() || it->second < count) return false;
  }
  return true;
}

// ---- action indexing -------------------------------------------------------

std::int64_t encode_selection(const ActionCaps& c, int u, int v, int k, int l) {
  return ((std::int64_t{u} * c.parts + v) * c.connections + k) * c.connections + l;
}

std::int64_t encode(const ActionCaps& c, const ActionOC& a) {
  return encode_selection(c, a.u, a.v, a.k, a.l) * c.orientations + a.w;
}

ActionOC decode_oc(const ActionCaps& c, std::int64_t index) {
  ActionOC a;
  a.w = static_cast<int>(index % c.orientations);
  index /= c.orientations;
  a.l = static_cast<int>(index % c.connections);
  index /= c.connections;
  a.k = static_cast<int>(index % c.connections);
  index /= c.connections;
  a.v = static_cast<int>(index % c.parts);
  a.u = static_cast<int>(index / c.parts);
  return a;
}

std::int64_t encode(const ActionCaps& c, const ActionFull& a) {
  return encode_selection(c, a.u, a.v, a.k, a.l) * c.orientations + a.g_a * kGraspChoices + a.g_b;
}

ActionFull decode_full(const ActionCaps& c, std::int64_t index) {
  const ActionOC base = decode_oc(c, index);
  return {base.u, base.v, base.k, base.l, base.w / kGraspChoices, base.w % kGraspChoices};
}

std::vector<std::int64_t> valid_selections(const AssemblyState& s, const ActionCaps& caps) {
  std::vector<std::int64_t> out;
  const int n = std::min(s.part_count(), caps.parts);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v || s.same_group(u, v)) continue;
      const int ku = std::min<int>(s.used[u].size(), caps.connections);
      const int kv = std::min<int>(s.used[v].size(), caps.connections);
      for (int k = 0; k < ku; ++k) {
        if (s.used[u][k]) continue;
        for (int l = 0; l < kv; ++l) {
          if (!s.used[v][l]) out.push_back(encode_selection(caps, u, v, k, l));
        }
      }
    }
  }
  return out;
}

std::vector<char> valid_action_mask(const AssemblyState& s, const ActionCaps& caps) {
  std::vector<char> mask(caps.action_count(), 0);
  for (std::int64_t sel : valid_selections(s, caps)) {
    std::fill_n(mask.begin() + sel * caps.orientations, caps.orientations, 1);
  }
  return mask;
}

void check_caps(const ChairAsset& chair, const ActionCaps& caps) {
  if (chair.part_count() > caps.parts) {
    throw Error(ErrorCode::CapExceeded, "chair " + std::to_string(chair.id) + " has " +
                                            std::to_string(chair.part_count()) + " parts");
  }
  for (const assets::Part& p : chair.parts) {
    if (static_cast<int>(p.connections.size()) > caps.connections) {
      throw Error(ErrorCode::CapExceeded, "chair " + std::to_string(chair.id) +
                                              " exceeds the connection cap");
    }
  }
}

}  // namespace partforge::env
