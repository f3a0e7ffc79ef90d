#pragma once

#include <limits>
#include <span>

#include "partforge/geom/pose.hpp"
#include "partforge/learn/mlp.hpp"

namespace partforge::learn {

/// Symmetric Chamfer distance: mean nearest squared distance from a to b
/// plus the same from b to a. Throws InvalidQuery on an empty cloud.
double chamfer(std::span<const geom::Vec3> a, std::span<const geom::Vec3> b);

/// Chamfer distance between point rows of `a` and `b` (each k x 3). When
/// `grad_a` is given it receives d(chamfer)/d(a).
template <typename Scalar>
Scalar chamfer_rows(const MatrixT<Scalar>& a, const MatrixT<Scalar>& b,
                    MatrixT<Scalar>* grad_a = nullptr) {
  const Eigen::Index na = a.rows(), nb = b.rows();
  if (na == 0 || nb == 0) throw Error(ErrorCode::InvalidQuery, "chamfer of an empty cloud");
  std::vector<Eigen::Index> nearest_b(na), nearest_a(nb);
  std::vector<Scalar> best_b(nb, std::numeric_limits<Scalar>::max());
  Scalar sum_a = 0, sum_b = 0;
  for (Eigen::Index i = 0; i < na; ++i) {
    Scalar best = std::numeric_limits<Scalar>::max();
    for (Eigen::Index j = 0; j < nb; ++j) {
      const Scalar dx = a(i, 0) - b(j, 0), dy = a(i, 1) - b(j, 1), dz = a(i, 2) - b(j, 2);
      const Scalar d = dx * dx + dy * dy + dz * dz;
      if (d < best) best = d, nearest_b[i] = j;
      if (d < best_b[j]) best_b[j] = d, nearest_a[j] = i;
    }
    sum_a += best;
  }
  for (Eigen::Index j = 0; j < nb; ++j) sum_b += best_b[j];
  if (grad_a) {
    grad_a->setZero(na, 3);
    const Scalar wa = Scalar(2) / Scalar(na), wb = Scalar(2) / Scalar(nb);
    for (Eigen::Index i = 0; i < na; ++i) grad_a->row(i) += wa * (a.row(i) - b.row(nearest_b[i]));
    for (Eigen::Index j = 0; j < nb; ++j) {
      grad_a->row(nearest_a[j]) += wb * (a.row(nearest_a[j]) - b.row(j));
    }
  }
  return sum_a / Scalar(na) + sum_b / Scalar(nb);
}

}  // namespace partforge::learn
