#pragma once

#include <memory>
#include <vector>

#include "partforge/assets/chair.hpp"
#include "partforge/env/step.hpp"

namespace partforge::testing {

/// Slot of `part` whose mate is `other`, or -1.
inline int slot_to(const assets::ChairAsset& c, int part, int other) {
  const auto& conns = c.parts[part].connections;
  for (int k = 0; k < static_cast<int>(conns.size()); ++k) {
    if (conns[k].mate_part == other) return k;
  }
  return -1;
}

struct ScriptedRollout {
  double total_reward = 0;
  bool fully_assembled = false;
  int steps = 0;
  std::vector<env::StepResult> results;
};

/// Replays the chair's assembly order in the object-centric setting.
inline ScriptedRollout replay_assembly_order(std::shared_ptr<const assets::ChairAsset> chair,
                                             std::uint64_t reset_seed,
                                             const env::StepParams& params) {
  ScriptedRollout out;
  env::AssemblyState s = env::reset(chair, reset_seed);
  for (const assets::AssemblyStep& st : chair->assembly_order) {
    const env::ActionOC a{st.u, st.v, slot_to(*chair, st.u, st.v), slot_to(*chair, st.v, st.u),
                          st.w};
    env::StepResult r = env::step_oc(s, a, params);
    out.total_reward += r.reward;
    ++out.steps;
    s = r.next_state;
    out.results.push_back(std::move(r));
    if (out.results.back().done) break;
  }
  out.fully_assembled = env::is_fully_assembled(s);
  return out;
}

}  // namespace partforge::testing
