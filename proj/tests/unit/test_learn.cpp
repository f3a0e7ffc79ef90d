#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "partforge/assets/annotate.hpp"
#include "partforge/assets/generator.hpp"
#include "partforge/common/error.hpp"
#include "partforge/geom/mesh.hpp"
#include "partforge/geom/sampling.hpp"
#include "partforge/learn/checkpoint.hpp"
#include "partforge/learn/ddqn.hpp"
#include "partforge/learn/distill.hpp"
#include "support/finite_diff.hpp"
#include "support/rollout.hpp"
#include "support/temp_dir.hpp"

using namespace partforge;
using namespace partforge::learn;
using assets::ChairAsset;
using geom::Pose6D;
using geom::Vec3;

namespace {

using MatD = MatrixT<double>;
using testing::worst_fd_error;

std::shared_ptr<const ChairAsset> chair_for(std::uint64_t seed, assets::Difficulty d) {
  ChairAsset c = assets::generate_chair(seed, d);
  assets::annotate_chair(c);
  return std::make_shared<const ChairAsset>(std::move(c));
}

// Seat slab on a single post.
std::shared_ptr<const ChairAsset> two_part_chair() {
  ChairAsset c;
  const Vec3 halves[] = {{0.2, 0.2, 0.02}, {0.03, 0.03, 0.225}};
  const Vec3 centers[] = {{0, 0, 0.472}, {0, 0, 0.225}};
  for (int i = 0; i < 2; ++i) {
    assets::Part p;
    p.id = i;
    p.mesh = geom::make_box(halves[i]);
    p.hull = geom::convex_hull(p.mesh);
    c.parts.push_back(p);
    c.gt_poses.push_back(Pose6D::translation(centers[i]));
  }
  assets::annotate_chair(c);
  return std::make_shared<const ChairAsset>(std::move(c));
}

MatD random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double scale = 1.0) {
  MatD m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.uniform(-scale, scale);
  }
  return m;
}

double brute_chamfer(const geom::PointCloud& a, const geom::PointCloud& b) {
  auto one_way = [](const geom::PointCloud& x, const geom::PointCloud& y) {
    double sum = 0;
    for (const Vec3& p : x) {
      double best = INFINITY;
      for (const Vec3& q : y) best = std::min(best, (p - q).squaredNorm());
      sum += best;
    }
    return sum / static_cast<double>(x.size());
  };
  return one_way(a, b) + one_way(b, a);
}

geom::PointCloud random_cloud(std::size_t n, Rng& rng) {
  geom::PointCloud c(n);
  for (Vec3& p : c) p = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
  return c;
}

std::vector<float> as_float(std::span<const double> v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("chamfer of identical clouds is zero") {
  Rng rng(1);
  const geom::PointCloud a = random_cloud(50, rng);
  CHECK(chamfer(a, a) == 0.0);
}

TEST_CASE("chamfer of two single points counts both directions") {
  const geom::PointCloud a{{0, 0, 0}}, b{{1, 0, 0}};
  CHECK(chamfer(a, b) == doctest::Approx(2.0));
}

TEST_CASE("chamfer matches a brute-force oracle and is symmetric") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const geom::PointCloud a = random_cloud(64, rng), b = random_cloud(64, rng);
    const double d = chamfer(a, b);
    CHECK(std::abs(d - brute_chamfer(a, b)) < 1e-7);
    CHECK(d == doctest::Approx(chamfer(b, a)).epsilon(1e-12));
    CHECK(d >= 0.0);
  }
}

TEST_CASE("chamfer rejects empty clouds") {
  const geom::PointCloud a{{0, 0, 0}}, empty;
  CHECK_THROWS_AS(chamfer(a, empty), Error);
  CHECK_THROWS_AS(chamfer(empty, a), Error);
}

TEST_CASE("chamfer gradient matches finite differences") {
  Rng rng(3);
  MatD a = random_matrix(12, 3, rng);
  const MatD b = random_matrix(9, 3, rng);
  MatD grad;
  chamfer_rows<double>(a, b, &grad);
  std::span<double> params(a.data(), static_cast<std::size_t>(a.size()));
  const double worst = worst_fd_error(params, std::span<const double>(grad.data(), grad.size()),
                                      [&] { return chamfer_rows<double>(a, b); });
  CHECK(worst < 1e-3);
}

TEST_CASE("autoencoder gradients match finite differences on a toy net") {
  const AeShape shape{{3, 8, 8, 6}, {8}, 10};
  auto ae = Autoencoder(shape, 5).cast<double>();
  Rng rng(4);
  std::vector<MatD> clouds;
  for (int i = 0; i < 3; ++i) clouds.push_back(random_matrix(10, 3, rng, 0.5));

  std::vector<double> enc_grad(ae.encoder().parameter_count());
  std::vector<double> dec_grad(ae.decoder().parameter_count());
  ae.loss(clouds, enc_grad, dec_grad);
  auto loss = [&] { return ae.loss(clouds); };
  CHECK(worst_fd_error(ae.encoder().parameters(), enc_grad, loss) < 1e-3);
  CHECK(worst_fd_error(ae.decoder().parameters(), dec_grad, loss) < 1e-3);
}

TEST_CASE("encoder output has the feature size for any point count") {
  const Autoencoder ae(AeShape{}, 1);
  Rng rng(5);
  for (int m : {1, 7, 256, 1000}) {
    CHECK(ae.encode(random_matrix(m, 3, rng).cast<float>()).size() == kFeatureSize);
  }
  CHECK(ae.reconstruct(random_matrix(20, 3, rng).cast<float>()).rows() == kCloudPoints);
}

TEST_CASE("encoder is invariant to point order") {
  const Autoencoder ae(AeShape{}, 2);
  Rng rng(6);
  const MatrixT<float> cloud = random_matrix(64, 3, rng).cast<float>();
  std::vector<int> order(64);
  std::iota(order.begin(), order.end(), 0);
  for (int i = 63; i > 0; --i) std::swap(order[i], order[rng.index(i + 1)]);
  MatrixT<float> shuffled(64, 3);
  for (int i = 0; i < 64; ++i) shuffled.row(i) = cloud.row(order[i]);
  const VectorT<float> a = ae.encode(cloud), b = ae.encode(shuffled);
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-5f * a.cwiseAbs().maxCoeff());
}

TEST_CASE("autoencoder memorizes a dataset of identical cubes") {
  const geom::PointCloud cube =
      normalize_cloud(geom::sample_point_cloud(geom::make_box({0.1, 0.1, 0.1}), 256, 11));
  const std::vector<geom::PointCloud> clouds(100, cube);
  AeTrainConfig config;
  config.epochs = 200;
  config.seed = 3;
  const AeTrainResult r = ae_train(clouds, config);
  MESSAGE("cube loss " << r.initial_loss << " -> " << r.final_loss);
  // Chamfer descent settles in local minima between 1e-3 and 1.7e-3 here.
  CHECK(r.final_loss < 2e-3);
  CHECK(r.final_loss < 0.1 * r.initial_loss);
  CHECK(ae_mean_loss(r.model, clouds) == doctest::Approx(r.final_loss).epsilon(0.5));
}

TEST_CASE("normalized clouds fit the unit box") {
  geom::PointCloud c{{1, 2, 3}, {3, 2, 3}, {2, 2.5, 4}};
  c = normalize_cloud(c);
  Vec3 lo = c[0], hi = c[0];
  for (const Vec3& p : c) lo = lo.cwiseMin(p), hi = hi.cwiseMax(p);
  CHECK((hi - lo).maxCoeff() == doctest::Approx(1.0));
  CHECK(((hi + lo) / 2).norm() < 1e-12);
}

TEST_CASE("part features are deterministic and shared by equivalent parts at equal poses") {
  const Autoencoder ae(AeShape{}, 3);
  const auto chair = chair_for(1, assets::Difficulty::Easy);
  const Pose6D pose = Pose6D::translation({0.3, -0.2, 0.1});
  int a = -1, b = -1;
  for (int x = 0; x < chair->part_count() && b < 0; ++x) {
    for (int y = x + 1; y < chair->part_count(); ++y) {
      if (chair->parts[x].equivalence_class == chair->parts[y].equivalence_class) {
        a = x, b = y;
        break;
      }
    }
  }
  REQUIRE(b >= 0);
  const auto fa = encode_part(ae, chair->parts[a], pose);
  CHECK(fa == encode_part(ae, chair->parts[a], pose));
  CHECK(fa == encode_part(ae, chair->parts[b], pose));
  CHECK(fa != encode_part(ae, chair->parts[a], pose, 0.01, 9));
}

TEST_CASE("state encoding layout") {
  const env::ActionCaps caps{8, 6, 6};
  const Autoencoder ae(AeShape{}, 4);
  const auto chair = chair_for(5, assets::Difficulty::Easy);
  const env::AssemblyState s = env::reset(chair, 3);
  const FeatureTable features = encode_parts(ae, s);
  const std::vector<float> e = build_state_encoding(s, features, caps);
  const int slot = kFeatureSize + kGraspSummarySize + kPoseSize;
  REQUIRE(e.size() == static_cast<std::size_t>(encoding_size(caps)));
  CHECK(encoding_size(caps) == 8 * 146 + 8 * 8 * 6);
  CHECK(encoding_size({20, 10, 6}) == 5320);

  SUBCASE("absent part slots are zero") {
    for (std::size_t i = static_cast<std::size_t>(s.part_count()) * slot; i < 8u * slot; ++i) {
      REQUIRE(e[i] == 0.0f);
    }
  }
  SUBCASE("feature and pose land in their slot") {
    for (int i = 0; i < kFeatureSize; ++i) CHECK(e[slot + i] == features[1][i]);
    CHECK(e[slot + kFeatureSize + kGraspSummarySize + 2] == static_cast<float>(s.poses[1].tz));
  }
  SUBCASE("a single pose change touches only that slot's pose entries") {
    env::AssemblyState moved = s;
    moved.poses[2].tx += 0.25;
    moved.poses[2].rz += 0.5;
    const std::vector<float> f = build_state_encoding(moved, features, caps);
    const std::size_t pose_begin = 2u * slot + kFeatureSize + kGraspSummarySize;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i < pose_begin || i >= pose_begin + kPoseSize) REQUIRE(e[i] == f[i]);
    }
    CHECK(e[pose_begin] != f[pose_begin]);
  }
  SUBCASE("connection tensor entries follow merges") {
    const auto rollout_chair = two_part_chair();
    const env::AssemblyState s0 = env::reset(rollout_chair, 1);
    const env::ActionOC a{1, 0, testing::slot_to(*rollout_chair, 1, 0),
                          testing::slot_to(*rollout_chair, 0, 1), 5};
    const env::StepResult r = env::step_oc(s0, a, {});
    REQUIRE(r.failure == env::Failure::None);
    const FeatureTable f2 = encode_parts(ae, s0);
    const std::vector<float> before = build_state_encoding(s0, f2, caps);
    const std::vector<float> after = build_state_encoding(r.next_state, f2, caps);
    const std::size_t tensor = 8u * slot;
    const std::size_t entry01 = tensor + (0 * 8 + 1) * kPoseSize;
    CHECK(std::all_of(before.begin() + tensor, before.end(), [](float x) { return x == 0; }));
    const Pose6D c = r.next_state.tensor.at(0, 1);
    CHECK(after[entry01 + 2] == static_cast<float>(c.tz));
  }
  SUBCASE("oversized chairs are rejected") {
    CHECK_THROWS_AS(build_state_encoding(s, features, {2, 6, 6}), Error);
  }
}

TEST_CASE("Q network forward") {
  const QNetShape shape{5, {6, 4}, 7};
  QNet net(shape, 1);
  Rng rng(8);
  const MatrixT<float> x = random_matrix(2, 5, rng).cast<float>();

  SUBCASE("zero weights give zero Q") {
    QNet zero = net;
    std::ranges::fill(zero.trunk().parameters(), 0.0f);
    std::ranges::fill(zero.head_parameters(), 0.0f);
    CHECK(zero.forward(x).isZero(0));
  }
  SUBCASE("a batch of two equals two single passes") {
    const MatrixT<float> both = net.forward(x);
    for (int r = 0; r < 2; ++r) {
      const MatrixT<float> one = net.forward(x.row(r));
      CHECK((both.row(r) - one).cwiseAbs().maxCoeff() < 1e-6f);
    }
  }
  SUBCASE("single entries agree with the full output") {
    const MatrixT<float> h = net.hidden(x);
    const MatrixT<float> q = net.forward(x);
    for (std::int64_t a = 0; a < 7; ++a) CHECK(net.value(h, 1, a) == doctest::Approx(q(1, a)));
  }
}

TEST_CASE("Q network gradients match finite differences") {
  const QNetShape shape{5, {6, 4}, 7};
  auto net = QNet(shape, 2).cast<double>();
  Rng rng(9);
  const MatD x = random_matrix(3, 5, rng);
  const MatD weights = random_matrix(3, 7, rng);
  auto objective = [&] { return net.forward(x).cwiseProduct(weights).sum(); };

  SUBCASE("full output") {
    std::vector<double> tg(net.trunk().parameter_count()), hg(net.head_parameters().size());
    BasicQNet<double>::Tape tape;
    const MatD h = net.hidden(x, tape);
    net.backward_full(tape, h, weights, tg, hg);
    CHECK(worst_fd_error(net.trunk().parameters(), tg, objective) < 1e-3);
    CHECK(worst_fd_error(net.head_parameters(), hg, objective) < 1e-3);
  }
  SUBCASE("selected entries") {
    const std::vector<std::int64_t> actions{2, 6, 2};
    const std::vector<double> g{0.7, -1.3, 0.4};
    auto sparse = [&] {
      const MatD q = net.forward(x);
      double s = 0;
      for (int i = 0; i < 3; ++i) s += g[i] * q(i, actions[i]);
      return s;
    };
    std::vector<double> tg(net.trunk().parameter_count()), hg(net.head_parameters().size());
    BasicQNet<double>::Tape tape;
    const MatD h = net.hidden(x, tape);
    net.backward_sparse(tape, h, actions, g, tg, hg);
    CHECK(worst_fd_error(net.trunk().parameters(), tg, sparse) < 1e-3);
    CHECK(worst_fd_error(net.head_parameters(), hg, sparse) < 1e-3);
  }
}

TEST_CASE("greedy selection respects the mask") {
  const std::vector<float> q{0.1f, 5.0f, 0.3f, 0.9f, 0.9f};
  SUBCASE("unique max inside the mask") {
    const std::vector<char> mask{1, 1, 1, 1, 1};
    CHECK(select_action(q, mask, 0.0, 1) == 1);
  }
  SUBCASE("masked-out global max is never chosen") {
    const std::vector<char> mask{1, 0, 1, 1, 1};
    for (std::uint64_t seed = 0; seed < 50; ++seed) CHECK(select_action(q, mask, 0.0, seed) == 3);
  }
  SUBCASE("always lands on a valid index") {
    Rng rng(10);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<float> values(30);
      std::vector<char> mask(30, 0);
      for (float& v : values) v = static_cast<float>(rng.uniform(-1, 1));
      mask[rng.index(30)] = 1;
      for (int i = 0; i < 5; ++i) mask[rng.index(30)] = 1;
      CHECK(mask[select_action(values, mask, 0.0, rng)]);
    }
  }
  SUBCASE("empty mask") {
    const std::vector<char> mask(5, 0);
    CHECK_THROWS_AS(select_action(q, mask, 0.0, 1), Error);
  }
}

TEST_CASE("exploration is uniform over the valid set") {
  const std::vector<float> q{9, 1, 2, 3, 4, 5, 6, 7, 8, 0};
  const std::vector<char> mask{0, 1, 1, 0, 1, 1, 1, 0, 1, 1};
  std::vector<int> counts(q.size(), 0);
  Rng rng(11);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++counts[select_action(q, mask, 1.0, rng)];
  const double expected = draws / 7.0;
  double chi2 = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!mask[i]) {
      CHECK(counts[i] == 0);
      continue;
    }
    chi2 += (counts[i] - expected) * (counts[i] - expected) / expected;
  }
  // 99th percentile of chi-square with 6 degrees of freedom.
  CHECK(chi2 < 16.812);
}

TEST_CASE("Double-DQN target") {
  const std::vector<float> online{0.2f, 0.9f, 0.5f, 3.0f};
  const std::vector<float> target{10.f, 20.f, 30.f, 40.f};
  const std::vector<std::int64_t> valid{0, 1, 2};
  CHECK(ddqn_target(5, true, 0.95, online, target, valid) == 5.0);
  CHECK(ddqn_target(1, false, 0.95, online, target, valid) == doctest::Approx(1 + 0.95 * 20));

  SUBCASE("target values never move the chosen action") {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<float> t(4);
      for (float& v : t) v = static_cast<float>(rng.uniform(-50, 50));
      CHECK(ddqn_target(1, false, 0.95, online, t, valid) == doctest::Approx(1 + 0.95 * t[1]));
    }
  }
  SUBCASE("ties go to the lowest index") {
    const std::vector<float> tied{1.f, 1.f, 1.f, 1.f};
    CHECK(ddqn_target(0, false, 0.5, tied, target, valid) == doctest::Approx(5.0));
  }
}

TEST_CASE("epsilon schedule") {
  DdqnConfig c;
  c.budget = 1000;
  CHECK(epsilon_at(c, 0) == doctest::Approx(1.0));
  CHECK(epsilon_at(c, 250) == doctest::Approx(0.525));
  CHECK(epsilon_at(c, 500) == doctest::Approx(0.05));
  CHECK(epsilon_at(c, 999) == doctest::Approx(0.05));
}

TEST_CASE("replay buffer evicts the oldest transitions") {
  ReplayBuffer replay(3);
  std::vector<std::int64_t> ids;
  for (int i = 0; i < 6; ++i) ids.push_back(replay.add_observation({{static_cast<float>(i)}, {}}));
  for (int i = 0; i < 5; ++i) replay.add({ids[i], i, 1.0f, ids[i + 1], false});
  REQUIRE(replay.size() == 3);
  CHECK(replay.transition(0).action == 2);
  CHECK(replay.observation(replay.transition(0).obs).encoding[0] == 2.0f);
  CHECK(replay.observation(replay.transition(2).next_obs).encoding[0] == 5.0f);
  CHECK_THROWS_AS(replay.observation(ids[0]), Error);

  Rng rng(13);
  std::vector<int> counts(3, 0);
  for (std::size_t i : replay.sample(3000, rng)) ++counts[i];
  for (int c : counts) CHECK(c > 850);
}

TEST_CASE("a learner update reduces the TD error on a fixed batch") {
  const env::ActionCaps caps{2, 1, 2};
  const QNetShape shape{4, {16}, caps.action_count()};
  DdqnConfig config;
  config.lr = 1e-2;
  DdqnLearner learner(shape, caps, config);
  ReplayBuffer replay(10);
  const auto o0 = replay.add_observation({{1, 0, 0, 0}, {env::encode_selection(caps, 0, 1, 0, 0)}});
  const auto o1 = replay.add_observation({{0, 1, 0, 0}, {}});
  replay.add({o0, 1, 5.0f, o1, true});
  const std::vector<std::size_t> batch{0};
  const double first = learner.update(replay, batch);
  double last = first;
  for (int i = 0; i < 50; ++i) last = learner.update(replay, batch);
  CHECK(last < 0.1 * first);
  CHECK(learner.updates() == 51);
}

TEST_CASE("single-chair training solves a two-part chair") {
  const auto chair = two_part_chair();
  const Autoencoder ae(AeShape{}, 7);
  const env::ActionCaps caps{8, 6, 6};
  DdqnConfig config;
  config.seed = 1;
  config.budget = 8000;
  config.eval_every = 1000;
  config.step.planner.max_states = 10000;
  const TrainResult r = train_single(chair, ae, caps, config);
  MESSAGE("two-part chair reached " << r.best_success << " at step " << r.best_step);
  CHECK(r.best_success == 1.0);
  CHECK(r.steps < config.budget);

  const EvalStats ev = evaluate_greedy(r.best, ae, chair, caps, 20, 99, config.step);
  CHECK(ev.success_rate == 1.0);

  SUBCASE("fixed seeds reproduce the learning curve") {
    const TrainResult again = train_single(chair, ae, caps, config);
    REQUIRE(again.curve.size() == r.curve.size());
    CHECK(curve_csv(again.curve) == curve_csv(r.curve));
    CHECK(again.best == r.best);
  }
}

TEST_CASE("learning curve CSV") {
  const std::vector<CurvePoint> curve{{10, 0.5, 0.9, NAN}, {20, 0.25, 0.5, 0.75}};
  CHECK(curve_csv(curve) == "step,loss,epsilon,eval_success\n10,0.5,0.9000,\n20,0.25,0.5000,0.7500\n");
}

TEST_CASE("distillation loss properties") {
  const std::vector<float> expert{0.1f, 2.0f, -1.0f, 0.5f};
  SUBCASE("identical predictions cost nothing") {
    const DistillLoss l = distill_loss(expert, expert);
    CHECK(l.l1 == 0.0);
    CHECK(l.l2 == 0.0);
    CHECK(l.total == 0.0);
  }
  SUBCASE("argmax agreement leaves only the value term") {
    const std::vector<float> pred{0.0f, 3.0f, 1.0f, 0.0f};
    const DistillLoss l = distill_loss(pred, expert);
    CHECK(l.l2 == 0.0);
    CHECK(l.total == doctest::Approx(l.l1));
    CHECK(l.l1 == doctest::Approx(std::sqrt(0.01 + 1.0 + 4.0 + 0.25)));
  }
  SUBCASE("disagreement costs lambda times the gap") {
    const std::vector<float> pred{0.0f, 1.0f, 1.5f, 0.0f};
    const DistillLoss l = distill_loss(pred, expert);
    CHECK(l.l2 == doctest::Approx(0.5));
    CHECK(l.total == doctest::Approx(l.l1 + 50 * 0.5));
  }
  SUBCASE("the gap is never negative") {
    Rng rng(14);
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<float> p(6), e(6);
      for (float& v : p) v = static_cast<float>(rng.uniform(-1, 1));
      for (float& v : e) v = static_cast<float>(rng.uniform(-1, 1));
      const std::vector<std::int64_t> valid{1, 3, 4};
      CHECK(distill_loss(p, e).l2 >= 0.0);
      CHECK(distill_loss(p, e, valid, 3, 50).l2 >= 0.0);
    }
  }
  SUBCASE("masked gradient matches finite differences") {
    Rng rng(15);
    std::vector<double> p(6);
    for (double& v : p) v = rng.uniform(-1, 1);
    const std::vector<float> e{0.3f, -0.2f, 0.9f, 0.1f, 0.4f, -0.7f};
    const std::vector<std::int64_t> valid{0, 2, 4, 5};
    std::vector<float> grad(6, 0.0f);
    distill_loss(as_float(p), e, valid, 2, 50, grad);
    const std::vector<double> analytic(grad.begin(), grad.end());
    const double worst = worst_fd_error(std::span<double>(p), analytic, [&] {
      return distill_loss(as_float(p), e, valid, 2, 50).total;
    });
    CHECK(worst < 1e-2);
  }
}

TEST_CASE("distillation memorizes a single teacher") {
  // Records from a scripted rollout, labelled by a fixed random teacher net.
  const auto chair = chair_for(3, assets::Difficulty::Easy);
  const env::ActionCaps caps{8, 6, 6};
  const Autoencoder ae(AeShape{}, 8);
  const QNet teacher({encoding_size(caps), {64}, caps.action_count()}, 21);
  std::vector<ExpertRecord> records;
  for (std::uint64_t reset_seed = 0; reset_seed < 5; ++reset_seed) {
    env::AssemblyState s = env::reset(chair, reset_seed);
    const FeatureTable features = encode_parts(ae, s);
    for (const assets::AssemblyStep& st : chair->assembly_order) {
      ExpertRecord rec;
      rec.encoding = build_state_encoding(s, features, caps);
      rec.q_expert = q_values(teacher, rec.encoding);
      rec.valid = expand_selections(env::valid_selections(s, caps), caps);
      rec.expert_action = *std::max_element(rec.valid.begin(), rec.valid.end(),
                                            [&](std::int64_t a, std::int64_t b) {
                                              return rec.q_expert[a] < rec.q_expert[b];
                                            });
      records.push_back(std::move(rec));
      const env::ActionOC a{st.u, st.v, testing::slot_to(*chair, st.u, st.v),
                            testing::slot_to(*chair, st.v, st.u), st.w};
      s = env::step_oc(s, a, {}).next_state;
    }
  }
  DistillConfig config;
  config.hidden = {256, 128};
  config.epochs = 150;
  config.batch = 8;
  const DistillResult r = distill_train(records, config);
  const double agreement = argmax_agreement(r.net, records);
  MESSAGE("agreement " << agreement << " over " << records.size() << " states");
  CHECK(agreement >= 0.99);
  CHECK(r.epoch_loss.back() < r.epoch_loss.front());
}

TEST_CASE("checkpoints round-trip") {
  testing::TempDir dir;
  SUBCASE("Q network") {
    const QNet net({10, {8, 4}, 144}, 3);
    save_qnet(dir.path("q.ckpt"), net, {2, 3, 4}, {{"seed", "3"}});
    const LoadedQNet back = load_qnet(dir.path("q.ckpt"));
    CHECK(back.net == net);
    CHECK(back.caps.parts == 2);
    CHECK(back.caps.connections == 3);
    CHECK(back.caps.orientations == 4);
    CHECK(back.meta.at("seed") == "3");
  }
  SUBCASE("autoencoder") {
    const Autoencoder ae(AeShape{{3, 5, 6}, {7}, 4}, 9);
    save_autoencoder(dir.path("ae.ckpt"), ae);
    CHECK(load_autoencoder(dir.path("ae.ckpt")).ae == ae);
    CHECK_THROWS_AS(load_qnet(dir.path("ae.ckpt")), Error);
  }
  SUBCASE("damaged files") {
    CHECK_THROWS_AS(load_qnet(dir.path("missing.ckpt")), Error);
    std::ofstream(dir.path("junk.ckpt")) << "not a checkpoint";
    try {
      load_qnet(dir.path("junk.ckpt"));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SchemaVersionMismatch);
    }
    const QNet net({4, {3}, 144}, 1);
    save_qnet(dir.path("cut.ckpt"), net, {2, 3, 4});
    std::filesystem::resize_file(dir.path("cut.ckpt"),
                                 std::filesystem::file_size(dir.path("cut.ckpt")) - 8);
    CHECK_THROWS_AS(load_qnet(dir.path("cut.ckpt")), Error);
  }
}
