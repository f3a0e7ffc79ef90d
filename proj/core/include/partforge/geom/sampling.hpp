#pragma once

#include <cstdint>

#include "partforge/geom/mesh.hpp"

namespace partforge::geom {

/// m points uniformly distributed over the surface by area. Same seed, same cloud.
PointCloud sample_point_cloud(const TriMesh& mesh, std::size_t m, std::uint64_t seed);

}  // namespace partforge::geom
