#include <benchmark/benchmark.h>

#include "partforge/common/rng.hpp"
#include "partforge/learn/autoencoder.hpp"
#include "partforge/learn/chamfer.hpp"
#include "partforge/learn/encoding.hpp"
#include "partforge/learn/qnet.hpp"

using namespace partforge;
using namespace partforge::learn;

namespace {

MatrixT<float> random_rows(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  MatrixT<float> m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = static_cast<float>(rng.uniform(-1, 1));
  }
  return m;
}

void BM_Chamfer(benchmark::State& state) {
  Rng rng(1);
  geom::PointCloud a(static_cast<std::size_t>(state.range(0))), b(a.size());
  for (auto& p : a) p = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
  for (auto& p : b) p = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
  for (auto _ : state) benchmark::DoNotOptimize(chamfer(a, b));
}
BENCHMARK(BM_Chamfer)->Arg(256)->Arg(1024);

void BM_EncodeCloud(benchmark::State& state) {
  const Autoencoder ae(AeShape{}, 1);
  const MatrixT<float> cloud = random_rows(256, 3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(ae.encode(cloud));
}
BENCHMARK(BM_EncodeCloud);

// Forward pass over the default object-centric action space.
void BM_QNetForward(benchmark::State& state) {
  const env::ActionCaps caps{8, 6, 6};
  const QNet net({encoding_size(caps), {1024, 512}, caps.action_count()}, 3);
  const MatrixT<float> x = random_rows(state.range(0), net.input_size(), 4);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_QNetForward)->Arg(1)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_QNetSparseBackward(benchmark::State& state) {
  const env::ActionCaps caps{8, 6, 6};
  QNet net({encoding_size(caps), {1024, 512}, caps.action_count()}, 5);
  const MatrixT<float> x = random_rows(64, net.input_size(), 6);
  std::vector<std::int64_t> actions(64);
  Rng rng(7);
  for (auto& a : actions) a = static_cast<std::int64_t>(rng.index(caps.action_count()));
  const std::vector<float> grad(64, 0.01f);
  std::vector<float> trunk_grad(net.trunk().parameter_count()), head_grad(net.head_parameters().size());
  for (auto _ : state) {
    QNet::Tape tape;
    const MatrixT<float> h = net.hidden(x, tape);
    net.backward_sparse(tape, h, actions, grad, trunk_grad, head_grad);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_QNetSparseBackward)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
