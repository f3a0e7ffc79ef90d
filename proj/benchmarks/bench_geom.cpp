#include <benchmark/benchmark.h>

#include "partforge/common/rng.hpp"
#include "partforge/geom/collision.hpp"
#include "partforge/geom/hull.hpp"
#include "partforge/geom/mesh.hpp"

using namespace partforge;
using namespace partforge::geom;

namespace {

Pose6D random_pose(Rng& rng, double extent) {
  return {rng.uniform(-extent, extent), rng.uniform(-extent, extent), rng.uniform(-extent, extent),
          rng.uniform(-3, 3),           rng.uniform(-1.5, 1.5),       rng.uniform(-3, 3)};
}

void BM_CollideBoxes(benchmark::State& state) {
  const ConvexHull a = convex_hull(make_box(Vec3(0.2, 0.1, 0.3)));
  const ConvexHull b = convex_hull(make_box(Vec3(0.05, 0.05, 0.25)));
  Rng rng(1);
  std::vector<Pose6D> poses(256);
  for (Pose6D& p : poses) p = random_pose(rng, 0.5);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(collide(a, poses[i % 256], b, poses[(i + 1) % 256]));
    ++i;
  }
}
BENCHMARK(BM_CollideBoxes);

void BM_MinDistanceCylinders(benchmark::State& state) {
  const ConvexHull a = convex_hull(make_cylinder(0.05, 0.25));
  Rng rng(2);
  std::vector<Pose6D> poses(256);
  for (Pose6D& p : poses) p = random_pose(rng, 0.8);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(min_distance(a, poses[i % 256], a, poses[(i + 1) % 256]));
    ++i;
  }
}
BENCHMARK(BM_MinDistanceCylinders);

void BM_ConvexHull(benchmark::State& state) {
  Rng rng(3);
  std::vector<Vec3> points(static_cast<std::size_t>(state.range(0)));
  for (Vec3& p : points) p = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
  for (auto _ : state) benchmark::DoNotOptimize(convex_hull(points));
}
BENCHMARK(BM_ConvexHull)->Arg(64)->Arg(512)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
