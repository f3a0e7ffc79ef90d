#pragma once

#include <string>

#include "partforge/geom/mesh.hpp"

namespace partforge::geom {

/// Wavefront OBJ subset: `v x y z` and `f a b c` records, 1-based indices,
/// coordinates written with 9 significant digits.
std::string write_obj(const TriMesh& mesh);
/// Accepts `i/j/k` index tokens and negative indices; polygons are
/// fan-triangulated; other record types are skipped. Throws IoError.
TriMesh read_obj(const std::string& text);

void save_obj(const std::string& path, const TriMesh& mesh);
TriMesh load_obj(const std::string& path);

}  // namespace partforge::geom
