#include "partforge/geom/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "partforge/common/error.hpp"
#include "partforge/common/rng.hpp"

namespace partforge::geom {

PointCloud sample_point_cloud(const TriMesh& mesh, std::size_t m, std::uint64_t seed) {
  if (m == 0) throw Error(ErrorCode::InvalidQuery, "sample count must be positive");
  std::vector<double> cumulative(mesh.triangles.size());
  double total = 0;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    total += triangle_area(mesh, i);
    cumulative[i] = total;
  }
  if (!(total > 0)) throw Error(ErrorCode::DegenerateGeometry, "mesh has no area");

  Rng rng(seed);
  PointCloud out;
  out.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double pick = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    const std::size_t tri =
        std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
    const auto& t = mesh.triangles[tri];
    const double r1 = std::sqrt(rng.uniform());
    const double r2 = rng.uniform();
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    out.push_back((1 - r1) * a + r1 * (1 - r2) * b + r1 * r2 * c);
  }
  return out;
}

}  // namespace partforge::geom
