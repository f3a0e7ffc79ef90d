#include "partforge/geom/mesh.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "partforge/common/error.hpp"

namespace partforge::geom {

namespace {

void orient_outward(TriMesh& mesh, const Vec3& inside) {
  for (auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    const Vec3 n = (b - a).cross(c - a);
    if (n.dot((a + b + c) / 3.0 - inside) < 0) std::swap(t[1], t[2]);
  }
}

}  // namespace

TriMesh make_box(const Vec3& h, const Vec3& center) {
  TriMesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.push_back(center + Vec3((i & 1) ? h.x() : -h.x(), (i & 2) ? h.y() : -h.y(),
                                       (i & 4) ? h.z() : -h.z()));
  }
  const int quads[6][4] = {{0, 2, 6, 4}, {1, 5, 7, 3}, {0, 4, 5, 1},
                           {2, 3, 7, 6}, {0, 1, 3, 2}, {4, 6, 7, 5}};
  for (const auto& q : quads) {
    m.triangles.push_back({q[0], q[1], q[2]});
    m.triangles.push_back({q[0], q[2], q[3]});
  }
  orient_outward(m, center);
  return m;
}

TriMesh make_cylinder(double radius, double half_height, const Vec3& center, int segments) {
  TriMesh m;
  const int n = segments;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    const Vec3 r(radius * std::cos(a), radius * std::sin(a), 0.0);
    m.vertices.push_back(center + r + Vec3(0, 0, -half_height));
    m.vertices.push_back(center + r + Vec3(0, 0, half_height));
  }
  const int bottom = 2 * n;
  const int top = 2 * n + 1;
  m.vertices.push_back(center + Vec3(0, 0, -half_height));
  m.vertices.push_back(center + Vec3(0, 0, half_height));
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const int b0 = 2 * i, t0 = 2 * i + 1, b1 = 2 * j, t1 = 2 * j + 1;
    m.triangles.push_back({b0, b1, t1});
    m.triangles.push_back({b0, t1, t0});
    m.triangles.push_back({bottom, b1, b0});
    m.triangles.push_back({top, t0, t1});
  }
  orient_outward(m, center);
  return m;
}

TriMesh transformed(const TriMesh& mesh, const Pose6D& pose) {
  TriMesh out = mesh;
  const Rigid t(pose);
  for (Vec3& v : out.vertices) v = t * v;
  return out;
}

TriMesh translated(const TriMesh& mesh, const Vec3& offset) {
  TriMesh out = mesh;
  for (Vec3& v : out.vertices) v += offset;
  return out;
}

TriMesh merged(const TriMesh& a, const TriMesh& b) {
  TriMesh out = a;
  const int base = static_cast<int>(a.vertices.size());
  out.vertices.insert(out.vertices.end(), b.vertices.begin(), b.vertices.end());
  for (auto t : b.triangles) out.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
  return out;
}

double triangle_area(const TriMesh& mesh, std::size_t tri) {
  const auto& t = mesh.triangles[tri];
  const Vec3& a = mesh.vertices[t[0]];
  return 0.5 * (mesh.vertices[t[1]] - a).cross(mesh.vertices[t[2]] - a).norm();
}

double surface_area(const TriMesh& mesh) {
  double s = 0;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) s += triangle_area(mesh, i);
  return s;
}

double volume(const TriMesh& mesh) {
  double v = 0;
  for (const auto& t : mesh.triangles) {
    v += mesh.vertices[t[0]].dot(mesh.vertices[t[1]].cross(mesh.vertices[t[2]]));
  }
  return v / 6.0;
}

Vec3 volume_centroid(const TriMesh& mesh) {
  if (mesh.vertices.empty()) throw Error(ErrorCode::DegenerateGeometry, "empty mesh");
  // shift to a local origin to keep the tetrahedra well conditioned
  const Vec3 ref = bounding_box(mesh.vertices).center();
  double vol = 0;
  Vec3 acc = Vec3::Zero();
  for (const auto& t : mesh.triangles) {
    const Vec3 a = mesh.vertices[t[0]] - ref;
    const Vec3 b = mesh.vertices[t[1]] - ref;
    const Vec3 c = mesh.vertices[t[2]] - ref;
    const double v = a.dot(b.cross(c)) / 6.0;
    vol += v;
    acc += v * (a + b + c) / 4.0;
  }
  const Vec3 ext = bounding_box(mesh.vertices).extents();
  const double scale = std::max({ext.x(), ext.y(), ext.z()});
  if (!(std::abs(vol) > 1e-12 * scale * scale * scale) || scale <= 0) {
    throw Error(ErrorCode::DegenerateGeometry, "mesh has zero volume");
  }
  return ref + acc / vol;
}

Aabb bounding_box(std::span<const Vec3> points) {
  Aabb box{Vec3::Constant(INFINITY), Vec3::Constant(-INFINITY)};
  for (const Vec3& p : points) {
    box.lo = box.lo.cwiseMin(p);
    box.hi = box.hi.cwiseMax(p);
  }
  return box;
}

bool is_valid(const TriMesh& mesh) {
  const int n = static_cast<int>(mesh.vertices.size());
  for (const Vec3& v : mesh.vertices) {
    if (!v.allFinite()) return false;
  }
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    for (int idx : mesh.triangles[i]) {
      if (idx < 0 || idx >= n) return false;
    }
    if (!(triangle_area(mesh, i) > 1e-12)) return false;
  }
  return !mesh.triangles.empty();
}

bool is_watertight(const TriMesh& mesh) {
  std::map<std::pair<int, int>, int> directed;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) ++directed[{t[e], t[(e + 1) % 3]}];
  }
  for (const auto& [edge, count] : directed) {
    if (count != 1) return false;
    auto it = directed.find({edge.second, edge.first});
    if (it == directed.end() || it->second != 1) return false;
  }
  return true;
}

}  // namespace partforge::geom
