#include "partforge/assets/chair.hpp"

#include "partforge/common/error.hpp"

namespace partforge::assets {

std::array<double, 9> ConnectionPoint::descriptor() const {
  return {position.x(), position.y(), position.z(), normal.x(), normal.y(),
          normal.z(),   tangent.x(),  tangent.y(),  tangent.z()};
}

std::string to_string(Difficulty d) { return d == Difficulty::Easy ? "easy" : "hard"; }

Difficulty difficulty_from_string(const std::string& s) {
  if (s == "easy") return Difficulty::Easy;
  if (s == "hard") return Difficulty::Hard;
  throw Error(ErrorCode::SchemaVersionMismatch, "unknown difficulty '" + s + "'");
}

}  // namespace partforge::assets
