#pragma once

#include <memory>
#include <vector>

#include "partforge/env/step.hpp"
#include "partforge/env/trajectory_log.hpp"
#include "partforge/learn/encoding.hpp"
#include "partforge/learn/qnet.hpp"

namespace partforge::learn {

/// With probability eps a uniform draw over mask-true indices, otherwise the
/// masked argmax (lowest index on ties). Throws NoValidAction on an empty mask.
std::int64_t select_action(std::span<const float> q, std::span<const char> mask, double eps,
                           Rng& rng);
std::int64_t select_action(std::span<const float> q, std::span<const char> mask, double eps,
                           std::uint64_t seed);

/// Q values of one encoding.
std::vector<float> q_values(const QNet& net, std::span<const float> encoding);

/// Actions of the valid selections (each expanded over the trailing
/// component), ascending.
std::vector<std::int64_t> expand_selections(std::span<const std::int64_t> selections,
                                            const env::ActionCaps& caps);

struct EpisodeResult {
  bool success = false;
  int steps = 0;
  double total_reward = 0;
  std::int64_t plan_states = 0;
  env::Failure last_failure = env::Failure::None;
  std::vector<std::int64_t> actions;
};

struct EvalStats {
  int episodes = 0;
  int successes = 0;
  double success_rate = 0;
  double mean_plan_states = 0;
  double mean_steps = 0;
};

/// Reset seed and planner seed of episode e are both derived from `seed`.
std::uint64_t episode_seed(std::uint64_t seed, int episode);

/// Greedy object-centric rollout. If `log` is given, records every step.
EpisodeResult run_greedy_episode(const QNet& net, const Autoencoder& ae,
                                 std::shared_ptr<const assets::ChairAsset> chair,
                                 const env::ActionCaps& caps, std::uint64_t seed, int episode,
                                 const env::StepParams& params,
                                 env::TrajectoryWriter* log = nullptr);

EvalStats evaluate_greedy(const QNet& net, const Autoencoder& ae,
                          std::shared_ptr<const assets::ChairAsset> chair,
                          const env::ActionCaps& caps, int episodes, std::uint64_t seed,
                          const env::StepParams& params);

}  // namespace partforge::learn
