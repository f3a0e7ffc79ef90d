#include "partforge/geom/obj_io.hpp"

#include <sstream>

#include "partforge/common/error.hpp"
#include "partforge/common/text.hpp"

namespace partforge::geom {

std::string write_obj(const TriMesh& mesh) {
  std::string out;
  for (const Vec3& v : mesh.vertices) {
    out += "v " + format_g9(v.x()) + " " + format_g9(v.y()) + " " + format_g9(v.z()) + "\n";
  }
  for (const auto& t : mesh.triangles) {
    out += "f " + std::to_string(t[0] + 1) + " " + std::to_string(t[1] + 1) + " " +
           std::to_string(t[2] + 1) + "\n";
  }
  return out;
}

TriMesh read_obj(const std::string& text) {
  TriMesh mesh;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) {
        throw Error(ErrorCode::IoError, "bad vertex on line " + std::to_string(line_no));
      }
      mesh.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<int> poly;
      std::string tok;
      while (ls >> tok) {
        int idx = 0;
        try {
          idx = std::stoi(tok.substr(0, tok.find('/')));
        } catch (const std::exception&) {
          throw Error(ErrorCode::IoError, "bad face index on line " + std::to_string(line_no));
        }
        const int n = static_cast<int>(mesh.vertices.size());
        idx = idx < 0 ? n + idx : idx - 1;
        if (idx < 0 || idx >= n) {
          throw Error(ErrorCode::IoError, "face index out of range on line " +
                                              std::to_string(line_no));
        }
        poly.push_back(idx);
      }
      if (poly.size() < 3) {
        throw Error(ErrorCode::IoError, "face with < 3 vertices on line " +
                                            std::to_string(line_no));
      }
      for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
        mesh.triangles.push_back({poly[0], poly[k], poly[k + 1]});
      }
    }
  }
  return mesh;
}

void save_obj(const std::string& path, const TriMesh& mesh) {
  write_text_file(path, write_obj(mesh));
}

TriMesh load_obj(const std::string& path) { return read_obj(read_text_file(path)); }

}  // namespace partforge::geom
