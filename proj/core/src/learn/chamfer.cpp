#include "partforge/learn/chamfer.hpp"

namespace partforge::learn {

double chamfer(std::span<const geom::Vec3> a, std::span<const geom::Vec3> b) {
  MatrixT<double> ma(a.size(), 3), mb(b.size(), 3);
  for (std::size_t i = 0; i < a.size(); ++i) ma.row(i) = a[i].transpose();
  for (std::size_t j = 0; j < b.size(); ++j) mb.row(j) = b[j].transpose();
  return chamfer_rows(ma, mb);
}

}  // namespace partforge::learn
