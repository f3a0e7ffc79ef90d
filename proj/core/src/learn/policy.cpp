#include "partforge/learn/policy.hpp"

#include <algorithm>
#include <limits>

namespace partforge::learn {

std::int64_t select_action(std::span<const float> q, std::span<const char> mask, double eps,
                           Rng& rng) {
  if (q.size() != mask.size()) throw Error(ErrorCode::CapMismatch, "Q and mask differ in length");
  const double draw = rng.uniform();
  std::int64_t best = -1;
  std::size_t valid = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!mask[i]) continue;
    ++valid;
    if (best < 0 || q[i] > q[best]) best = static_cast<std::int64_t>(i);
  }
  if (best < 0) throw Error(ErrorCode::NoValidAction, "no valid action in mask");
  if (draw >= eps) return best;
  std::size_t pick = rng.index(valid);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] && pick-- == 0) return static_cast<std::int64_t>(i);
  }
  return best;
}

std::int64_t select_action(std::span<const float> q, std::span<const char> mask, double eps,
                           std::uint64_t seed) {
  Rng rng(seed);
  return select_action(q, mask, eps, rng);
}

std::vector<float> q_values(const QNet& net, std::span<const float> encoding) {
  if (static_cast<int>(encoding.size()) != net.input_size()) {
    throw Error(ErrorCode::CapMismatch, "encoding length does not match the network input");
  }
  const MatrixT<float> x =
      Eigen::Map<const MatrixT<float>>(encoding.data(), 1, static_cast<Eigen::Index>(encoding.size()));
  const MatrixT<float> q = net.forward(x);
  return {q.data(), q.data() + q.size()};
}

std::vector<std::int64_t> expand_selections(std::span<const std::int64_t> selections,
                                            const env::ActionCaps& caps) {
  std::vector<std::int64_t> out;
  out.reserve(selections.size() * caps.orientations);
  for (std::int64_t s : selections) {
    for (int w = 0; w < caps.orientations; ++w) out.push_back(s * caps.orientations + w);
  }
  return out;
}

std::uint64_t episode_seed(std::uint64_t seed, int episode) {
  return mix_seed(seed, static_cast<std::uint64_t>(episode));
}

EpisodeResult run_greedy_episode(const QNet& net, const Autoencoder& ae,
                                 std::shared_ptr<const assets::ChairAsset> chair,
                                 const env::ActionCaps& caps, std::uint64_t seed, int episode,
                                 const env::StepParams& params, env::TrajectoryWriter* log) {
  if (net.action_count() != caps.action_count()) {
    throw Error(ErrorCode::CapMismatch, "network output does not match the action caps");
  }
  const std::uint64_t eseed = episode_seed(seed, episode);
  env::AssemblyState s = env::reset(chair, eseed);
  const FeatureTable features = encode_parts(ae, s);
  env::StepParams step = params;
  step.planner.seed = mix_seed(params.planner.seed, eseed);
  if (log) log->write(env::reset_record(episode, s));

  EpisodeResult out;
  Rng rng(eseed);
  for (;;) {
    const std::vector<char> mask = env::valid_action_mask(s, caps);
    if (std::find(mask.begin(), mask.end(), 1) == mask.end()) break;
    const std::vector<float> q = q_values(net, build_state_encoding(s, features, caps));
    const std::int64_t a = select_action(q, mask, 0.0, rng);
    env::StepResult r = env::step_action(s, caps, a, step);
    if (log) log->write(env::step_record(episode, caps, a, step.setting, r));
    out.actions.push_back(a);
    ++out.steps;
    out.total_reward += r.reward;
    out.plan_states += r.plan_states;
    out.last_failure = r.failure;
    s = std::move(r.next_state);
    if (r.done) break;
  }
  out.success = env::is_fully_assembled(s);
  return out;
}

EvalStats evaluate_greedy(const QNet& net, const Autoencoder& ae,
                          std::shared_ptr<const assets::ChairAsset> chair,
                          const env::ActionCaps& caps, int episodes, std::uint64_t seed,
                          const env::StepParams& params) {
  EvalStats st;
  double states = 0, steps = 0;
  for (int e = 0; e < episodes; ++e) {
    const EpisodeResult r = run_greedy_episode(net, ae, chair, caps, seed, e, params);
    ++st.episodes;
    st.successes += r.success;
    states += static_cast<double>(r.plan_states);
    steps += r.steps;
  }
  if (st.episodes > 0) {
    st.success_rate = static_cast<double>(st.successes) / st.episodes;
    st.mean_plan_states = states / st.episodes;
    st.mean_steps = steps / st.episodes;
  }
  return st;
}

}  // namespace partforge::learn
