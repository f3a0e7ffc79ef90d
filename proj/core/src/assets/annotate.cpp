#include "partforge/assets/annotate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "partforge/common/error.hpp"
#include "partforge/common/text.hpp"
#include "partforge/geom/collision.hpp"
#include "partforge/geom/sampling.hpp"

namespace partforge::assets {

namespace {

constexpr std::uint64_t kCloudSeed = 0x5eed;
constexpr std::size_t kCloudSize = 512;
constexpr double kEquivalenceThreshold = 1e-6;

Vec3 round9(const Vec3& v) {
  return v.unaryExpr([](double x) { return round_sig9(x); });
}

struct Contact {
  Vec3 a;       // world point on part i
  Vec3 b;       // world point on part j
  Vec3 normal;  // world, from i toward j
};

double separation_along(const Vec3& n, const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  double max_a = -INFINITY, min_b = INFINITY;
  for (const Vec3& p : a) max_a = std::max(max_a, n.dot(p));
  for (const Vec3& p : b) min_b = std::min(min_b, n.dot(p));
  return min_b - max_a;
}

std::vector<Vec3> world_vertices(const geom::ConvexHull& h, const geom::Rigid& t) {
  std::vector<Vec3> out;
  for (const Vec3& v : h.vertices()) out.push_back(t * v);
  return out;
}

Contact find_contact(const geom::ConvexHull& ha, const geom::Rigid& ta,
                     const geom::ConvexHull& hb, const geom::Rigid& tb,
                     const geom::DistanceResult& d) {
  const geom::ConvexShape sa(ha, ta), sb(hb, tb);
  const auto va = world_vertices(ha, ta);
  const auto vb = world_vertices(hb, tb);
  const geom::Rigid id;
  auto near_set = [&](const std::vector<Vec3>& pts, const geom::ConvexShape& other) {
    std::vector<Vec3> out;
    for (const Vec3& p : pts) {
      const std::vector<Vec3> one{p};
      if (geom::distance(geom::ConvexShape(one, id), other).distance <= d.distance + 1e-6) {
        out.push_back(p);
      }
    }
    return out;
  };
  auto mean = [](const std::vector<Vec3>& pts) {
    Vec3 m = Vec3::Zero();
    for (const Vec3& p : pts) m += p;
    return Vec3(m / static_cast<double>(pts.size()));
  };
  auto closest_on = [&](const Vec3& p, const geom::ConvexShape& other) {
    const std::vector<Vec3> one{p};
    return geom::distance(geom::ConvexShape(one, id), other).point_b;
  };

  const auto near_a = near_set(va, sb);
  const auto near_b = near_set(vb, sa);
  Contact c;
  if (!near_b.empty() && (near_a.empty() || near_b.size() <= near_a.size())) {
    c.b = mean(near_b);
    c.a = closest_on(c.b, sa);
  } else if (!near_a.empty()) {
    c.a = mean(near_a);
    c.b = closest_on(c.a, sb);
  } else {
    c.a = d.point_a;
    c.b = d.point_b;
  }

  if (d.distance > geom::kContactTolerance && (c.b - c.a).norm() > geom::kContactTolerance) {
    c.normal = (c.b - c.a).normalized();
    return c;
  }
  // touching: take the face normal with the largest separation
  double best = -INFINITY;
  for (const geom::Facet& f : ha.facets()) {
    const Vec3 n = ta.r * f.plane.normal;
    const double s = separation_along(n, va, vb);
    if (s > best) best = s, c.normal = n;
  }
  for (const geom::Facet& f : hb.facets()) {
    const Vec3 n = -(tb.r * f.plane.normal);
    const double s = separation_along(n, va, vb);
    if (s > best) best = s, c.normal = n;
  }
  return c;
}

ConnectionPoint make_connection(const geom::Rigid& part_pose, const Vec3& world_point,
                                const Vec3& world_normal) {
  ConnectionPoint cp;
  const geom::Rigid inv = part_pose.inverse();
  const Vec3 n = (inv.r * world_normal).normalized();
  cp.position = round9(inv * world_point);
  cp.normal = round9(n);
  cp.tangent = round9(tangent_for(n));
  return cp;
}

}  // namespace

std::pair<geom::TriMesh, Vec3> recenter_to_com(const geom::TriMesh& mesh) {
  const Vec3 c = geom::volume_centroid(mesh);
  return {geom::translated(mesh, -c), c};
}

Vec3 tangent_for(const Vec3& n) {
  for (int i = 0; i < 3; ++i) {
    const Vec3 e = Vec3::Unit(i);
    if (std::abs(e.dot(n)) < 0.9) return (e - e.dot(n) * n).normalized();
  }
  return Vec3::UnitX();  // unreachable for unit n
}

void detect_connections(ChairAsset& chair, int max_connections) {
  const int n = chair.part_count();
  struct Found {
    int i, j;
    Contact contact;
  };
  std::vector<Found> found;
  std::vector<geom::Rigid> poses;
  for (const Pose6D& p : chair.gt_poses) poses.emplace_back(p);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const geom::DistanceResult d =
          geom::distance(geom::ConvexShape(chair.parts[i].hull, poses[i]),
                         geom::ConvexShape(chair.parts[j].hull, poses[j]));
      if (d.distance >= kConnectionThreshold) continue;
      found.push_back({i, j,
                       find_contact(chair.parts[i].hull, poses[i], chair.parts[j].hull,
                                    poses[j], d)});
    }
  }

  for (Part& p : chair.parts) p.connections.clear();
  // pairs are generated in (i, j) lexicographic order, so appending keeps
  // each part's connections sorted by mate id
  std::vector<std::vector<std::pair<int, int>>> slots(n);  // (mate, found index)
  for (std::size_t f = 0; f < found.size(); ++f) {
    slots[found[f].i].push_back({found[f].j, static_cast<int>(f)});
    slots[found[f].j].push_back({found[f].i, static_cast<int>(f)});
  }
  for (int x = 0; x < n; ++x) {
    std::sort(slots[x].begin(), slots[x].end());
    if (static_cast<int>(slots[x].size()) > max_connections) {
      throw Error(ErrorCode::TooManyConnections,
                  "part " + std::to_string(x) + " has " + std::to_string(slots[x].size()) +
                      " connections");
    }
  }
  auto slot_of = [&](int part, int f) {
    const auto& s = slots[part];
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s[k].second == f) return static_cast<int>(k);
    }
    return -1;
  };
  for (int x = 0; x < n; ++x) {
    for (const auto& [mate, f] : slots[x]) {
      const Found& fd = found[f];
      const bool first = fd.i == x;
      ConnectionPoint cp = make_connection(poses[x], first ? fd.contact.a : fd.contact.b,
                                           first ? fd.contact.normal : Vec3(-fd.contact.normal));
      cp.mate_part = mate;
      cp.mate_connection = slot_of(mate, f);
      chair.parts[x].connections.push_back(cp);
    }
  }
  chair.gt_adjacency.clear();
  for (std::size_t f = 0; f < found.size(); ++f) {
    chair.gt_adjacency.push_back({found[f].i, slot_of(found[f].i, static_cast<int>(f)),
                                  found[f].j, slot_of(found[f].j, static_cast<int>(f))});
  }
}

double chamfer_below(const geom::PointCloud& a, const geom::PointCloud& b, double limit) {
  auto one_way = [](const geom::PointCloud& from, const geom::PointCloud& to, double budget) {
    double sum = 0;
    for (const Vec3& p : from) {
      double best = INFINITY;
      for (const Vec3& q : to) best = std::min(best, (p - q).squaredNorm());
      sum += best;
      if (sum >= budget) return std::numeric_limits<double>::infinity();
    }
    return sum;
  };
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double ab = one_way(a, b, limit * na);
  if (!std::isfinite(ab)) return limit;
  const double ba = one_way(b, a, (limit - ab / na) * nb);
  if (!std::isfinite(ba)) return limit;
  return std::min(limit, ab / na + ba / nb);
}

const std::vector<geom::Mat3>& cube_rotations() {
  static const std::vector<geom::Mat3> rotations = [] {
    std::vector<geom::Mat3> out;
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perms) {
      for (int signs = 0; signs < 8; ++signs) {
        geom::Mat3 m = geom::Mat3::Zero();
        for (int r = 0; r < 3; ++r) m(r, p[r]) = (signs & (1 << r)) ? -1.0 : 1.0;
        if (m.determinant() > 0) out.push_back(m);
      }
    }
    return out;
  }();
  return rotations;
}

std::vector<int> compute_equivalence_classes(const ChairAsset& chair) {
  const int n = chair.part_count();
  std::vector<geom::PointCloud> clouds;
  std::vector<Vec3> extents;
  for (const Part& p : chair.parts) {
    clouds.push_back(geom::sample_point_cloud(p.mesh, kCloudSize, kCloudSeed));
    Vec3 e = geom::bounding_box(clouds.back()).extents();
    std::sort(e.data(), e.data() + 3);
    extents.push_back(e);
  }
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (find(i) == find(j)) continue;
      // extents differing by d force a Chamfer term of at least d^2/(4m)
      if ((extents[i] - extents[j]).cwiseAbs().maxCoeff() > 0.05) continue;
      for (const geom::Mat3& r : cube_rotations()) {
        geom::PointCloud rotated;
        rotated.reserve(clouds[j].size());
        for (const Vec3& p : clouds[j]) rotated.push_back(r * p);
        if (chamfer_below(clouds[i], rotated, kEquivalenceThreshold) < kEquivalenceThreshold) {
          parent[find(j)] = find(i);
          break;
        }
      }
    }
  }
  std::vector<int> label(n, -1), by_root(n, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (by_root[r] < 0) by_root[r] = next++;
    label[i] = by_root[r];
  }
  return label;
}

std::array<GraspRegion, 2> generate_grasp_regions(const Part& part) {
  const geom::Aabb box = geom::bounding_box(part.mesh.vertices);
  const Vec3 ext = box.extents();
  int axis = 0;
  for (int i = 1; i < 3; ++i) {
    if (ext(i) > ext(axis)) axis = i;
  }
  const int b = (axis + 1) % 3 < (axis + 2) % 3 ? (axis + 1) % 3 : (axis + 2) % 3;
  const int c = 3 - axis - b;
  const double len = ext(axis);
  std::array<GraspRegion, 2> out;
  for (int s = 0; s < 2; ++s) {
    GraspRegion& g = out[s];
    g.center = box.center();
    g.center(axis) += (s == 0 ? -1.0 : 1.0) * len / 3.0;
    g.half_extents = 0.5 * ext;
    g.half_extents(axis) = len / 6.0;
    g.center = round9(g.center);
    g.half_extents = round9(g.half_extents);
    g.approach_dirs = {Vec3::Unit(b), Vec3(-Vec3::Unit(b)), Vec3::Unit(c), Vec3(-Vec3::Unit(c))};
  }
  return out;
}

void annotate_chair(ChairAsset& chair, int max_connections) {
  detect_connections(chair, max_connections);
  const std::vector<int> labels = compute_equivalence_classes(chair);
  for (int i = 0; i < chair.part_count(); ++i) {
    chair.parts[i].equivalence_class = labels[i];
    chair.parts[i].grasp_regions = generate_grasp_regions(chair.parts[i]);
  }
}

}  // namespace partforge::assets
