#include <benchmark/benchmark.h>

#include "partforge/assets/annotate.hpp"
#include "partforge/assets/generator.hpp"
#include "partforge/env/step.hpp"
#include "partforge/planner/full_assembly.hpp"
#include "partforge/planner/rrt_connect.hpp"

using namespace partforge;
using namespace partforge::planner;

namespace {

std::shared_ptr<const assets::ChairAsset> chair_for(std::uint64_t seed, assets::Difficulty d) {
  assets::ChairAsset c = assets::generate_chair(seed, d);
  assets::annotate_chair(c);
  return std::make_shared<const assets::ChairAsset>(std::move(c));
}

void BM_RrtConnectEmptySpace(benchmark::State& state) {
  const double lo[3] = {-1, -1, -1}, hi[3] = {1, 1, 1};
  const ConfigSpace space = make_rigid_space(1, lo, hi, [](auto) { return true; });
  const Config a{-0.9, -0.9, -0.9, 0, 0, 0}, b{0.9, 0.9, 0.9, 2.0, -1.0, 0.5};
  RrtParams p;
  for (auto _ : state) {
    ++p.seed;
    benchmark::DoNotOptimize(rrt_connect(space, a, b, p));
  }
}
BENCHMARK(BM_RrtConnectEmptySpace);

// Scripted first merge: reorientation plus one mating query.
void BM_MatingStep(benchmark::State& state) {
  const auto chair = chair_for(3, assets::Difficulty::Easy);
  const env::AssemblyState s = env::reset(chair, 0);
  const assets::AssemblyStep& st = chair->assembly_order.front();
  auto slot = [&](int part, int other) {
    const auto& conns = chair->parts[part].connections;
    for (int k = 0; k < static_cast<int>(conns.size()); ++k) {
      if (conns[k].mate_part == other) return k;
    }
    return -1;
  };
  const env::ActionOC a{st.u, st.v, slot(st.u, st.v), slot(st.v, st.u), st.w};
  env::StepParams params;
  std::int64_t states = 0;
  for (auto _ : state) {
    ++params.planner.seed;
    const env::StepResult r = env::step_oc(s, a, params);
    states += r.plan_states;
  }
  state.counters["states/step"] = benchmark::Counter(static_cast<double>(states),
                                                     benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_MatingStep)->Unit(benchmark::kMillisecond);

void BM_FullAssemblyPlan(benchmark::State& state) {
  const auto chair = chair_for(static_cast<std::uint64_t>(state.range(0)), assets::Difficulty::Easy);
  const env::AssemblyState s = env::reset(chair, 1);
  RrtParams p;
  std::int64_t states = 0;
  for (auto _ : state) {
    ++p.seed;
    states += plan_full_assembly(*chair, s.poses, p).states_attempted;
  }
  state.counters["parts"] = chair->part_count();
  state.counters["states/plan"] = benchmark::Counter(static_cast<double>(states),
                                                     benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_FullAssemblyPlan)->Arg(0)->Arg(3)->Unit(benchmark::kMillisecond)->Iterations(5);

}  // namespace

BENCHMARK_MAIN();
