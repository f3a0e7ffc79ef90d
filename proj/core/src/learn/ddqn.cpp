#include "partforge/learn/ddqn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace partforge::learn {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw Error(ErrorCode::ConfigError, "replay capacity must be positive");
}

std::int64_t ReplayBuffer::add_observation(Observation obs) {
  observations_.push_back(std::move(obs));
  return first_obs_ + static_cast<std::int64_t>(observations_.size()) - 1;
}

void ReplayBuffer::add(const Transition& t) {
  transitions_.push_back(t);
  if (transitions_.size() > capacity_) transitions_.pop_front();
  const std::int64_t keep = transitions_.front().obs;
  while (first_obs_ < keep && !observations_.empty()) {
    observations_.pop_front();
    ++first_obs_;
  }
}

const Observation& ReplayBuffer::observation(std::int64_t id) const {
  if (id < first_obs_ || id >= first_obs_ + static_cast<std::int64_t>(observations_.size())) {
    throw Error(ErrorCode::InvalidQuery, "observation no longer in replay memory");
  }
  return observations_[static_cast<std::size_t>(id - first_obs_)];
}

std::vector<std::size_t> ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  std::vector<std::size_t> out(n);
  for (std::size_t& i : out) i = rng.index(transitions_.size());
  return out;
}

namespace {

// Index into `candidates` of the largest score, first one on ties.
template <typename Score>
std::int64_t argmax_over(std::span<const std::int64_t> candidates, Score score) {
  std::int64_t best = -1;
  double best_value = 0;
  for (std::int64_t a : candidates) {
    const double v = score(a);
    if (best < 0 || v > best_value || (v == best_value && a < best)) best = a, best_value = v;
  }
  return best;
}

}  // namespace

double ddqn_target(double reward, bool done, double gamma, std::span<const float> online_next,
                   std::span<const float> target_next, std::span<const std::int64_t> valid_next) {
  if (done || valid_next.empty()) return reward;
  const std::int64_t a = argmax_over(valid_next, [&](std::int64_t i) { return online_next[i]; });
  return reward + gamma * target_next[a];
}

double epsilon_at(const DdqnConfig& config, std::int64_t step) {
  const double horizon = config.eps_fraction * static_cast<double>(config.budget);
  if (horizon <= 0) return config.eps_end;
  const double f = std::min(1.0, static_cast<double>(step) / horizon);
  return config.eps_start + f * (config.eps_end - config.eps_start);
}

DdqnLearner::DdqnLearner(const QNetShape& shape, const env::ActionCaps& caps,
                         const DdqnConfig& config)
    : config_(config),
      caps_(caps),
      online_(shape, mix_seed(config.seed, 0x716e6574)),
      target_(online_),
      trunk_opt_(online_.trunk().parameter_count(), {config.lr}),
      head_opt_(online_.head_parameters().size(), {config.lr}),
      trunk_grad_(online_.trunk().parameter_count(), 0.f),
      head_grad_(online_.head_parameters().size(), 0.f) {}

double DdqnLearner::update(const ReplayBuffer& replay, std::span<const std::size_t> batch) {
  const Eigen::Index n = static_cast<Eigen::Index>(batch.size());
  const int in = online_.input_size();
  MatrixT<float> x(n, in);
  std::vector<std::int64_t> actions(n);
  std::vector<Eigen::Index> live;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Transition& t = replay.transition(batch[i]);
    const auto& enc = replay.observation(t.obs).encoding;
    x.row(i) = Eigen::Map<const Eigen::RowVectorXf>(enc.data(), in);
    actions[i] = t.action;
    if (!t.done) live.push_back(i);
  }

  std::vector<double> targets(n);
  for (Eigen::Index i = 0; i < n; ++i) targets[i] = replay.transition(batch[i]).reward;
  if (!live.empty()) {
    MatrixT<float> xn(static_cast<Eigen::Index>(live.size()), in);
    for (std::size_t j = 0; j < live.size(); ++j) {
      const auto& enc = replay.observation(replay.transition(batch[live[j]]).next_obs).encoding;
      xn.row(j) = Eigen::Map<const Eigen::RowVectorXf>(enc.data(), in);
    }
    const MatrixT<float> h_online = online_.hidden(xn);
    const MatrixT<float> h_target = target_.hidden(xn);
    for (std::size_t j = 0; j < live.size(); ++j) {
      const Transition& t = replay.transition(batch[live[j]]);
      const std::vector<std::int64_t> valid =
          expand_selections(replay.observation(t.next_obs).valid_selections, caps_);
      if (valid.empty()) continue;
      const auto row = static_cast<Eigen::Index>(j);
      const std::int64_t a = argmax_over(
          valid, [&](std::int64_t k) { return static_cast<double>(online_.value(h_online, row, k)); });
      targets[live[j]] += config_.gamma * static_cast<double>(target_.value(h_target, row, a));
    }
  }

  QNet::Tape tape;
  const MatrixT<float> h = online_.hidden(x, tape);
  std::vector<float> grad_values(n);
  double loss = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double err = static_cast<double>(online_.value(h, i, actions[i])) - targets[i];
    loss += err * err;
    grad_values[i] = static_cast<float>(2.0 * err / static_cast<double>(n));
  }
  loss /= static_cast<double>(n);
  if (!std::isfinite(loss)) {
    throw Error(ErrorCode::Diverged, "TD loss became non-finite after " +
                                         std::to_string(updates_) + " updates");
  }

  std::fill(trunk_grad_.begin(), trunk_grad_.end(), 0.f);
  online_.backward_sparse(tape, h, actions, grad_values, trunk_grad_, head_grad_);
  trunk_opt_.step(online_.trunk().parameters(), trunk_grad_);

  std::vector<std::int64_t> touched = actions;
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (std::int64_t a : touched) {
    for (const auto& r : online_.head_ranges(a)) ranges.push_back(r);
  }
  head_opt_.step_ranges(online_.head_parameters(), head_grad_, ranges);
  for (const auto& [b, e] : ranges) std::fill(head_grad_.begin() + b, head_grad_.begin() + e, 0.f);

  if (++updates_ % config_.target_sync == 0) target_ = online_;
  return loss;
}

TrainResult train_single(std::shared_ptr<const assets::ChairAsset> chair, const Autoencoder& ae,
                         const env::ActionCaps& caps, const DdqnConfig& config) {
  env::check_caps(*chair, caps);
  if (config.batch < 1 || config.train_freq < 1 || config.target_sync < 1 || config.budget < 1) {
    throw Error(ErrorCode::ConfigError, "batch, train_freq, target_sync and budget must be positive");
  }
  const QNetShape shape{encoding_size(caps, ae.feature_size()), config.hidden, caps.action_count()};
  DdqnLearner learner(shape, caps, config);
  ReplayBuffer replay(config.replay);
  Rng rng(mix_seed(config.seed, 0x74726169));
  const std::uint64_t train_seed = mix_seed(config.seed, 0x65706973);
  const std::uint64_t eval_seed = mix_seed(config.seed, 0x6576616c);

  TrainResult result;
  result.best = learner.online();
  result.best_success = -1;

  int episode = 0;
  env::AssemblyState s;
  FeatureTable features;
  env::StepParams step_params = config.step;
  std::int64_t obs = 0;
  auto observe = [&](const env::AssemblyState& st) {
    return replay.add_observation(
        {build_state_encoding(st, features, caps), env::valid_selections(st, caps)});
  };
  auto begin_episode = [&] {
    const std::uint64_t eseed = episode_seed(train_seed, episode++);
    s = env::reset(chair, eseed);
    features = encode_parts(ae, s);
    step_params.planner.seed = mix_seed(config.step.planner.seed, eseed);
    obs = observe(s);
  };
  begin_episode();

  double loss_sum = 0;
  std::int64_t loss_count = 0;
  for (std::int64_t t = 1; t <= config.budget; ++t) {
    const std::vector<std::int64_t> valid =
        expand_selections(replay.observation(obs).valid_selections, caps);
    if (valid.empty()) {
      begin_episode();
      continue;
    }
    const double eps = epsilon_at(config, t - 1);
    std::int64_t a;
    if (rng.uniform() < eps) {
      a = valid[rng.index(valid.size())];
    } else {
      const std::vector<float> q = q_values(learner.online(), replay.observation(obs).encoding);
      a = argmax_over(std::span<const std::int64_t>(valid),
                      [&](std::int64_t k) { return static_cast<double>(q[k]); });
    }
    env::StepResult r = env::step_action(s, caps, a, step_params);
    const std::int64_t next = observe(r.next_state);
    replay.add({obs, a, static_cast<float>(r.reward), next, r.done});
    if (r.done) {
      begin_episode();
    } else {
      s = std::move(r.next_state);
      obs = next;
    }

    if (t >= config.learning_starts && t % config.train_freq == 0) {
      loss_sum += learner.update(replay, replay.sample(config.batch, rng));
      ++loss_count;
    }
    if (t % config.eval_every == 0 || t == config.budget) {
      const EvalStats ev = evaluate_greedy(learner.online(), ae, chair, caps,
                                           config.eval_episodes, eval_seed, config.step);
      result.curve.push_back({t, loss_count ? loss_sum / loss_count : 0.0, eps, ev.success_rate});
      loss_sum = 0;
      loss_count = 0;
      if (ev.success_rate > result.best_success) {
        result.best_success = ev.success_rate;
        result.best = learner.online();
        result.best_step = t;
      }
      result.steps = t;
      if (ev.success_rate >= config.stop_success) break;
    }
    result.steps = t;
  }
  result.best_success = std::max(result.best_success, 0.0);
  return result;
}

std::string curve_csv(std::span<const CurvePoint> curve) {
  std::string out = "step,loss,epsilon,eval_success\n";
  char buf[128];
  for (const CurvePoint& c : curve) {
    std::snprintf(buf, sizeof buf, "%lld,%.6g,%.4f,", static_cast<long long>(c.step), c.loss,
                  c.epsilon);
    out += buf;
    if (!std::isnan(c.eval_success)) {
      std::snprintf(buf, sizeof buf, "%.4f", c.eval_success);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace partforge::learn
