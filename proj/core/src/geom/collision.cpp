#include "partforge/geom/collision.hpp"

#include <algorithm>
#include <cmath>

namespace partforge::geom {

namespace {

struct SimplexVertex {
  Vec3 w;  // a - b
  Vec3 a;
  Vec3 b;
};

struct Simplex {
  SimplexVertex v[4];
  int size = 0;
};

// Closest point of the affine hull of the chosen vertices to the origin.
// Returns false when the sub-simplex is degenerate or the closest point is
// not interior (some barycentric weight <= 0).
bool solve_subset(const Simplex& s, const int* idx, int k, double* lambda, Vec3& point) {
  const Vec3& p0 = s.v[idx[0]].w;
  if (k == 1) {
    lambda[0] = 1.0;
    point = p0;
    return true;
  }
  const int m = k - 1;
  Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
  Vec3 rhs = Vec3::Zero();
  Vec3 q[3];
  for (int i = 0; i < m; ++i) q[i] = s.v[idx[i + 1]].w - p0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) g(i, j) = q[i].dot(q[j]);
    rhs(i) = -q[i].dot(p0);
  }
  double diag = 1.0;
  for (int i = 0; i < m; ++i) diag *= g(i, i);
  Vec3 mu = Vec3::Zero();
  if (m == 1) {
    if (!(g(0, 0) > 0)) return false;
    mu(0) = rhs(0) / g(0, 0);
  } else if (m == 2) {
    const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    if (!(det > 1e-12 * diag)) return false;
    mu(0) = (rhs(0) * g(1, 1) - g(0, 1) * rhs(1)) / det;
    mu(1) = (g(0, 0) * rhs(1) - g(1, 0) * rhs(0)) / det;
  } else {
    const double det = g.determinant();
    if (!(det > 1e-12 * diag)) return false;
    mu = g.inverse() * rhs;
  }
  double sum = 0;
  for (int i = 0; i < m; ++i) {
    lambda[i + 1] = mu(i);
    sum += mu(i);
  }
  lambda[0] = 1.0 - sum;
  for (int i = 0; i < k; ++i) {
    if (!(lambda[i] > 0)) return false;
  }
  point = p0;
  for (int i = 0; i < m; ++i) point += mu(i) * q[i];
  return true;
}

// Replace the simplex by the face holding the closest point; returns that point.
Vec3 reduce(Simplex& s, double* weights) {
  double best = INFINITY;
  int best_mask = 0;
  double best_lambda[4] = {};
  Vec3 best_point = Vec3::Zero();
  const int n = s.size;
  for (int mask = 1; mask < (1 << n); ++mask) {
    int idx[4] = {};
    int k = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) idx[k++] = i;
    }
    double lambda[4];
    Vec3 p;
    if (!solve_subset(s, idx, k, lambda, p)) continue;
    const double d = p.squaredNorm();
    if (d < best) {
      best = d;
      best_mask = mask;
      best_point = p;
      std::copy(lambda, lambda + k, best_lambda);
    }
  }
  Simplex out;
  for (int i = 0; i < n; ++i) {
    if (best_mask & (1 << i)) {
      weights[out.size] = best_lambda[out.size];
      out.v[out.size++] = s.v[i];
    }
  }
  s = out;
  return best_point;
}

bool shape_less(const ConvexShape& a, const ConvexShape& b) {
  for (int i = 0; i < 9; ++i) {
    if (a.pose.r(i) != b.pose.r(i)) return a.pose.r(i) < b.pose.r(i);
  }
  for (int i = 0; i < 3; ++i) {
    if (a.pose.t(i) != b.pose.t(i)) return a.pose.t(i) < b.pose.t(i);
  }
  if (a.points.size() != b.points.size()) return a.points.size() < b.points.size();
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    for (int i = 0; i < 3; ++i) {
      if (a.points[k](i) != b.points[k](i)) return a.points[k](i) < b.points[k](i);
    }
  }
  return false;
}

// tol < 0: full distance. tol >= 0: stop as soon as the gap provably exceeds tol.
DistanceResult gjk(const ConvexShape& a, const ConvexShape& b, double tol, bool& separated) {
  separated = false;
  Simplex s;
  double weights[4] = {1, 0, 0, 0};
  {
    const Vec3 d = b.pose.t - a.pose.t;
    const Vec3 sa = a.support(d);
    const Vec3 sb = b.support(-d);
    s.v[0] = {sa - sb, sa, sb};
    s.size = 1;
  }
  Vec3 v = s.v[0].w;
  bool touching = false;
  for (int iter = 0; iter < 64; ++iter) {
    const double vv = v.squaredNorm();
    if (vv < 1e-24) {
      touching = true;
      break;
    }
    const Vec3 sa = a.support(-v);
    const Vec3 sb = b.support(v);
    const Vec3 w = sa - sb;
    const double vw = v.dot(w);
    if (tol >= 0 && vw > tol * std::sqrt(vv)) {
      separated = true;
      break;
    }
    if (vv - vw <= 1e-10 * vv) break;
    bool duplicate = false;
    for (int i = 0; i < s.size; ++i) {
      if ((s.v[i].w - w).squaredNorm() <= 1e-30) duplicate = true;
    }
    if (duplicate) break;
    s.v[s.size++] = {w, sa, sb};
    const Vec3 next = reduce(s, weights);
    if (s.size == 4) {
      touching = true;
      v = next;
      break;
    }
    v = next;
    if (next.squaredNorm() >= vv) break;  // no further progress
  }
  DistanceResult r;
  r.point_a = Vec3::Zero();
  r.point_b = Vec3::Zero();
  for (int i = 0; i < s.size; ++i) {
    r.point_a += weights[i] * s.v[i].a;
    r.point_b += weights[i] * s.v[i].b;
  }
  r.distance = touching ? 0.0 : std::sqrt(v.squaredNorm());
  return r;
}

}  // namespace

Vec3 ConvexShape::support(const Vec3& world_dir) const {
  const Vec3 d = pose.r.transpose() * world_dir;
  std::size_t best = 0;
  double best_dot = points[0].dot(d);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double s = points[i].dot(d);
    if (s > best_dot) {
      best_dot = s;
      best = i;
    }
  }
  return pose * points[best];
}

DistanceResult distance(const ConvexShape& a, const ConvexShape& b) {
  bool separated = false;
  if (shape_less(b, a)) {
    DistanceResult r = gjk(b, a, -1.0, separated);
    std::swap(r.point_a, r.point_b);
    return r;
  }
  return gjk(a, b, -1.0, separated);
}

bool intersect(const ConvexShape& a, const ConvexShape& b, double tol) {
  if (a.radius > 0 && b.radius > 0 &&
      (a.pose.t - b.pose.t).norm() - a.radius - b.radius > tol) {
    return false;
  }
  bool separated = false;
  const DistanceResult r = shape_less(b, a) ? gjk(b, a, tol, separated) : gjk(a, b, tol, separated);
  if (separated) return false;
  return r.distance <= tol;
}

DistanceResult min_distance(const ConvexHull& a, const Pose6D& pa, const ConvexHull& b,
                            const Pose6D& pb) {
  return distance(ConvexShape(a, Rigid(pa)), ConvexShape(b, Rigid(pb)));
}

bool collide(const ConvexHull& a, const Pose6D& pa, const ConvexHull& b, const Pose6D& pb) {
  return intersect(ConvexShape(a, Rigid(pa)), ConvexShape(b, Rigid(pb)));
}

DistanceResult min_distance(const TriMesh& a, const Pose6D& pa, const TriMesh& b,
                            const Pose6D& pb) {
  return min_distance(convex_hull(a), pa, convex_hull(b), pb);
}

bool collide(const TriMesh& a, const Pose6D& pa, const TriMesh& b, const Pose6D& pb) {
  return collide(convex_hull(a), pa, convex_hull(b), pb);
}

double min_height(const ConvexShape& s) {
  double z = INFINITY;
  for (const Vec3& p : s.points) z = std::min(z, (s.pose * p).z());
  return z;
}

}  // namespace partforge::geom
