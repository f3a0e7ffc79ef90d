#include <doctest.h>

#include <array>
#include <cmath>

#include "partforge/assets/annotate.hpp"
#include "partforge/assets/generator.hpp"
#include "partforge/common/error.hpp"
#include "partforge/common/rng.hpp"
#include "partforge/geom/collision.hpp"
#include "partforge/planner/full_assembly.hpp"
#include "partforge/planner/mating.hpp"
#include "partforge/planner/report.hpp"
#include "partforge/planner/rrt_connect.hpp"
#include "support/sealed_scene.hpp"

using namespace partforge;
using namespace partforge::planner;
using geom::Pose6D;
using geom::Vec3;
using testing::grid_reachable;
using testing::point_free;
using testing::sealed_box;
using testing::Wall;

namespace {

const double kLo[3] = {-1, -1, -1};
const double kHi[3] = {1, 1, 1};

void check_path(const ConfigSpace& space, const PlanOutcome& out, const Config& start,
                const Config& goal, const Resolution& res) {
  REQUIRE(out.found);
  CHECK(out.path.front() == start);
  CHECK(out.path.back() == goal);
  for (const Config& q : out.path) CHECK(space.is_valid(q));
  for (std::size_t i = 0; i + 1 < out.path.size(); ++i) {
    CHECK(check_motion(space, out.path[i], out.path[i + 1], res));
  }
}

}  // namespace

TEST_CASE("interpolation takes the shortest arc") {
  const Config a{0, 0, 0, 3.0, 0, 0};
  const Config b{1, 0, 0, -3.0, 0, 0};
  const Config mid = interpolate(a, b, 0.5);
  CHECK(mid[0] == doctest::Approx(0.5));
  CHECK(std::abs(std::abs(mid[3]) - M_PI) < 1e-9);
  CHECK(interpolate(a, b, 1.0) == b);
  CHECK(max_block_delta(a, b).rotation == doctest::Approx(2 * M_PI - 6.0));
}

TEST_CASE("start equal to goal") {
  const ConfigSpace space = make_rigid_space(1, kLo, kHi, [](auto) { return true; });
  const Config q{0.1, 0.2, 0.3, 0, 0, 0};
  const PlanOutcome out = rrt_connect(space, q, q, {});
  CHECK(out.found);
  CHECK(out.path.size() == 1);
  CHECK(out.states_attempted == 0);
}

TEST_CASE("invalid start or goal is rejected") {
  const auto walls = sealed_box();
  const ConfigSpace space =
      make_rigid_space(1, kLo, kHi, [&](std::span<const double> q) { return point_free(walls, q); });
  const Config inside_wall{0.32, 0, 0, 0, 0, 0};
  const Config free{0.8, 0.8, 0.8, 0, 0, 0};
  try {
    rrt_connect(space, inside_wall, free, {});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidQuery);
  }
  CHECK_THROWS_AS(rrt_connect(space, free, inside_wall, {}), Error);
}

TEST_CASE("empty space is solved quickly") {
  const ConfigSpace space = make_rigid_space(1, kLo, kHi, [](auto) { return true; });
  const Config a{-0.9, -0.9, -0.9, 0, 0, 0};
  const Config b{0.9, 0.9, 0.9, 2.0, -1.0, 0.5};
  int quick = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RrtParams p;
    p.seed = seed;
    const PlanOutcome out = rrt_connect(space, a, b, p);
    CHECK(out.found);
    quick += out.states_attempted < 5000;
    if (seed < 5) check_path(space, out, a, b, p.resolution);
  }
  CHECK(quick >= 95);
}

TEST_CASE("sealed goal is unreachable") {
  const auto walls = sealed_box();
  const ConfigSpace space =
      make_rigid_space(1, kLo, kHi, [&](std::span<const double> q) { return point_free(walls, q); });
  const Config start{0.8, 0.7, -0.6, 0, 0, 0};
  const Config goal{0, 0, 0, 0.5, 0, 0};
  REQUIRE_FALSE(grid_reachable(walls, Vec3(0.8, 0.7, -0.6), Vec3(0, 0, 0)));
  RrtParams p;
  p.max_states = 3000;
  const PlanOutcome out = rrt_connect(space, start, goal, p);
  CHECK_FALSE(out.found);
  CHECK(out.states_attempted == p.max_states);

  // the same query with one wall removed is solvable
  auto open = walls;
  open.pop_back();
  REQUIRE(grid_reachable(open, Vec3(0.8, 0.7, -0.6), Vec3(0, 0, 0)));
  const ConfigSpace open_space =
      make_rigid_space(1, kLo, kHi, [&](std::span<const double> q) { return point_free(open, q); });
  p.max_states = 100000;
  check_path(open_space, rrt_connect(open_space, start, goal, p), start, goal, p.resolution);
}

TEST_CASE("planning is deterministic per seed") {
  auto open = sealed_box();
  open.pop_back();
  const ConfigSpace space =
      make_rigid_space(1, kLo, kHi, [&](std::span<const double> q) { return point_free(open, q); });
  const Config start{0.8, 0.7, -0.6, 0, 0, 0};
  const Config goal{0, 0, 0, 0.5, 0, 0};
  RrtParams p;
  p.seed = 9;
  const PlanOutcome a = rrt_connect(space, start, goal, p);
  const PlanOutcome b = rrt_connect(space, start, goal, p);
  CHECK(a.states_attempted == b.states_attempted);
  CHECK(a.path == b.path);
}

TEST_CASE("check_motion") {
  const std::vector<Wall> wall{{Vec3(-0.02, -1, -1), Vec3(0.02, 1, 1)}};
  const ConfigSpace space =
      make_rigid_space(1, kLo, kHi, [&](std::span<const double> q) { return point_free(wall, q); });
  const Config a{-0.5, 0, 0, 0, 0, 0}, b{0.5, 0, 0, 0, 0, 0};
  const Resolution res;
  CHECK(check_motion(space, a, a, res));
  CHECK_FALSE(check_motion(space, a, b, res));

  // thin wall: coarse and fine checks may only disagree on grazing segments
  const std::vector<Wall> thin{{Vec3(-0.004, -0.3, -0.3), Vec3(0.004, 0.3, 0.3)}};
  const ConfigSpace thin_space =
      make_rigid_space(1, kLo, kHi, [&](std::span<const double> q) { return point_free(thin, q); });
  Rng rng(4);
  int agree = 0, total = 0;
  while (total < 1000) {
    Config p(6), q(6);
    for (int i = 0; i < 3; ++i) {
      p[i] = rng.uniform(-0.5, 0.5);
      q[i] = rng.uniform(-0.5, 0.5);
    }
    if (!thin_space.is_valid(p) || !thin_space.is_valid(q)) continue;
    ++total;
    const bool coarse = check_motion(thin_space, p, q, res);
    const bool fine = check_motion(thin_space, p, q, {res.translation / 10, res.rotation / 10});
    agree += coarse == fine;
  }
  CHECK(agree >= 995);
}

TEST_CASE("plan_mating in free space and into an enclosed socket") {
  const geom::ConvexHull part = geom::convex_hull(geom::make_box(Vec3(0.02, 0.02, 0.1)));
  const geom::ConvexHull slab = geom::convex_hull(geom::make_box(Vec3(0.2, 0.2, 0.02)));
  MatingScene scene;
  scene.moving = {{&part, geom::Rigid()}};
  scene.obstacles = {{&slab, geom::Rigid(Pose6D::translation(0, 0, 0.02))}};
  const Pose6D start = Pose6D::translation(1.0, 0.5, 0.1);
  const Pose6D target = Pose6D::translation(0, 0, 0.142);
  RrtParams p;
  const PlanOutcome free_out = plan_mating(scene, start, target, p);
  REQUIRE(free_out.found);
  CHECK(free_out.path.back() == to_config(target));

  // socket closed on every side: walls and a lid around the target
  const geom::ConvexHull wall_x = geom::convex_hull(geom::make_box(Vec3(0.01, 0.06, 0.15)));
  const geom::ConvexHull wall_y = geom::convex_hull(geom::make_box(Vec3(0.06, 0.01, 0.15)));
  const geom::ConvexHull lid = geom::convex_hull(geom::make_box(Vec3(0.06, 0.06, 0.01)));
  MatingScene socket = scene;
  socket.obstacles.push_back({&wall_x, geom::Rigid(Pose6D::translation(0.05, 0, 0.19))});
  socket.obstacles.push_back({&wall_x, geom::Rigid(Pose6D::translation(-0.05, 0, 0.19))});
  socket.obstacles.push_back({&wall_y, geom::Rigid(Pose6D::translation(0, 0.05, 0.19))});
  socket.obstacles.push_back({&wall_y, geom::Rigid(Pose6D::translation(0, -0.05, 0.19))});
  socket.obstacles.push_back({&lid, geom::Rigid(Pose6D::translation(0, 0, 0.35))});
  REQUIRE(scene_valid(socket, to_config(target)));
  p.max_states = 3000;
  const PlanOutcome blocked = plan_mating(socket, start, target, p);
  CHECK_FALSE(blocked.found);
  CHECK(blocked.states_attempted == 3000);

  // goal in collision: nothing is attempted
  const PlanOutcome bad = plan_mating(scene, start, Pose6D::translation(0, 0, 0.05), p);
  CHECK_FALSE(bad.found);
  CHECK(bad.states_attempted == 0);
}

TEST_CASE("a pocket facing the ground needs the holder flipped") {
  // an open-bottomed cup standing on the ground; the part must go inside it
  const geom::ConvexHull part = geom::convex_hull(geom::make_box(Vec3(0.02, 0.02, 0.05)));
  const geom::ConvexHull side_x = geom::convex_hull(geom::make_box(Vec3(0.01, 0.07, 0.08)));
  const geom::ConvexHull side_y = geom::convex_hull(geom::make_box(Vec3(0.05, 0.01, 0.08)));
  const geom::ConvexHull top = geom::convex_hull(geom::make_box(Vec3(0.07, 0.07, 0.01)));
  auto cup = [&](bool flipped, MatingScene& s) {
    const double zs = 0.08, zt = flipped ? 0.005 + 0.0 : 0.17;
    const double zside = flipped ? 0.02 + zs : zs;
    s.obstacles = {{&side_x, geom::Rigid(Pose6D::translation(0.06, 0, zside))},
                   {&side_x, geom::Rigid(Pose6D::translation(-0.06, 0, zside))},
                   {&side_y, geom::Rigid(Pose6D::translation(0, 0.06, zside))},
                   {&side_y, geom::Rigid(Pose6D::translation(0, -0.06, zside))},
                   {&top, geom::Rigid(Pose6D::translation(0, 0, flipped ? 0.01 : zt))}};
  };
  MatingScene upright, flipped;
  upright.moving = flipped.moving = {{&part, geom::Rigid()}};
  cup(false, upright);
  cup(true, flipped);
  // part hangs from the cup's closed end, 2 mm away from it
  const Pose6D target_up = Pose6D::translation(0, 0, 0.16 - 0.002 - 0.05);
  const Pose6D target_flip = Pose6D::translation(0, 0, 0.02 + 0.002 + 0.05);
  REQUIRE(scene_valid(upright, to_config(target_up)));
  REQUIRE(scene_valid(flipped, to_config(target_flip)));
  RrtParams p;
  p.max_states = 3000;
  const Pose6D start = Pose6D::translation(1.0, -0.8, 0.05);
  CHECK_FALSE(plan_mating(upright, start, target_up, p).found);
  p.max_states = 100000;
  CHECK(plan_mating(flipped, start, target_flip, p).found);
}

TEST_CASE("plan_full_assembly") {
  assets::ChairAsset two;
  for (int i = 0; i < 2; ++i) {
    assets::Part part;
    part.id = i;
    part.mesh = geom::make_box(Vec3(0.1, 0.1, 0.05));
    part.hull = geom::convex_hull(part.mesh);
    two.parts.push_back(part);
  }
  two.gt_poses = {Pose6D::translation(0, 0, 0.05), Pose6D::translation(0, 0, 0.152)};
  const std::vector<Pose6D> init{Pose6D::translation(-1, 0, 0.05),
                                 Pose6D{1, 0.5, 0.05, 0, 0, 0.7}};
  const auto goal = assembly_goal(two, init);
  CHECK(goal[0].tx == doctest::Approx(0.0));
  CHECK(goal[0].ty == doctest::Approx(0.25));
  CHECK(goal[0].tz == doctest::Approx(0.05));
  RrtParams p;
  const PlanOutcome out = plan_full_assembly(two, init, p);
  CHECK(out.found);
  CHECK(out.states_attempted <= p.max_states);

  assets::ChairAsset one = two;
  one.parts.pop_back();
  one.gt_poses.pop_back();
  const PlanOutcome lone = plan_full_assembly(one, {init[0]}, p);
  CHECK(lone.found);
  CHECK(lone.path.size() == 1);

  assets::ChairAsset chair = assets::generate_chair(0, assets::Difficulty::Easy);
  std::vector<Pose6D> spread;
  for (int i = 0; i < chair.part_count(); ++i) {
    // upright parts spread along x
    Pose6D q = chair.gt_poses[i];
    q.tx = -1.6 + 0.8 * i;
    q.ty = 1.0;
    q.tz -= geom::min_height(geom::ConvexShape(chair.parts[i].hull, geom::Rigid(q)));
    spread.push_back(q);
  }
  p.max_states = 1500;
  const PlanOutcome capped = plan_full_assembly(chair, spread, p);
  CHECK(capped.states_attempted <= 1500);
  if (!capped.found) CHECK(capped.states_attempted == 1500);
}

TEST_CASE("planner report csv") {
  const std::string csv = planner_report_csv({{3, "full", false, 100000, 12.5}});
  CHECK(csv == "chair_id,query_kind,result,states_attempted,wall_ms\n3,full,no_path,100000,12.500\n");
}
