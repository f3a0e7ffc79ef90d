#pragma once

#include <deque>
#include <limits>
#include <memory>
#include <vector>

#include "partforge/learn/adam.hpp"
#include "partforge/learn/policy.hpp"

namespace partforge::learn {

/// Observation in the replay memory: the state encoding and its valid
/// selections (before expansion over the trailing action component).
struct Observation {
  std::vector<float> encoding;
  std::vector<std::int64_t> valid_selections;
};

struct Transition {
  std::int64_t obs = 0;
  std::int64_t action = 0;
  float reward = 0;
  std::int64_t next_obs = 0;
  bool done = false;
};

/// FIFO transition memory. Observations are stored once and shared by the
/// transitions that reference them; they are dropped together with the
/// oldest transition that uses them.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  std::int64_t add_observation(Observation obs);
  void add(const Transition& t);

  std::size_t size() const { return transitions_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& transition(std::size_t i) const { return transitions_[i]; }
  const Observation& observation(std::int64_t id) const;
  /// Uniform draw with replacement.
  std::vector<std::size_t> sample(std::size_t n, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::deque<Transition> transitions_;
  std::deque<Observation> observations_;
  std::int64_t first_obs_ = 0;
};

/// Double-DQN regression target: reward if done, else reward + gamma times
/// the target net's value at the online net's argmax over `valid_next`
/// (lowest index on ties).
double ddqn_target(double reward, bool done, double gamma, std::span<const float> online_next,
                   std::span<const float> target_next, std::span<const std::int64_t> valid_next);

struct DdqnConfig {
  std::int64_t budget = 40000;
  double gamma = 0.95;
  double lr = 1e-4;
  int batch = 64;
  std::size_t replay = 50000;
  int target_sync = 1000;
  int train_freq = 4;
  std::int64_t learning_starts = 1000;
  double eps_start = 1.0;
  double eps_end = 0.05;
  double eps_fraction = 0.5;
  std::int64_t eval_every = 2000;
  int eval_episodes = 20;
  /// Training stops at the first evaluation reaching this success rate.
  double stop_success = 1.0;
  std::vector<int> hidden{1024, 512};
  std::uint64_t seed = 0;
  env::StepParams step;
};

/// Linear anneal from eps_start to eps_end over eps_fraction of the budget.
double epsilon_at(const DdqnConfig& config, std::int64_t step);

/// Online and target networks with their optimizer state.
class DdqnLearner {
 public:
  DdqnLearner(const QNetShape& shape, const env::ActionCaps& caps, const DdqnConfig& config);

  const QNet& online() const { return online_; }
  const QNet& target() const { return target_; }
  QNet& online() { return online_; }
  QNet& target() { return target_; }
  std::int64_t updates() const { return updates_; }

  /// One gradient step on the squared TD error of the given transitions.
  /// Syncs the target every target_sync updates. Throws Diverged.
  double update(const ReplayBuffer& replay, std::span<const std::size_t> batch);

 private:
  DdqnConfig config_;
  env::ActionCaps caps_;
  QNet online_, target_;
  Adam trunk_opt_, head_opt_;
  std::vector<float> trunk_grad_, head_grad_;
  std::int64_t updates_ = 0;
};

struct CurvePoint {
  std::int64_t step = 0;
  double loss = 0;
  double epsilon = 0;
  double eval_success = std::numeric_limits<double>::quiet_NaN();
};

struct TrainResult {
  QNet best;
  double best_success = 0;
  std::int64_t best_step = 0;
  std::int64_t steps = 0;
  std::vector<CurvePoint> curve;
};

/// Single-chair masked Double-DQN with epsilon-greedy exploration. Returns
/// the network with the best greedy evaluation.
TrainResult train_single(std::shared_ptr<const assets::ChairAsset> chair, const Autoencoder& ae,
                         const env::ActionCaps& caps, const DdqnConfig& config);

std::string curve_csv(std::span<const CurvePoint> curve);

}  // namespace partforge::learn
