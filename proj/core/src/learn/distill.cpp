#include "partforge/learn/distill.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "partforge/learn/adam.hpp"

namespace partforge::learn {

namespace {

std::int64_t masked_argmax(std::span<const float> q, std::span<const std::int64_t> valid) {
  std::int64_t best = -1;
  for (std::int64_t a : valid) {
    if (best < 0 || q[a] > q[best] || (q[a] == q[best] && a < best)) best = a;
  }
  return best;
}

}  // namespace

DistillLoss distill_loss(std::span<const float> pred, std::span<const float> expert,
                         double lambda) {
  std::vector<std::int64_t> all(pred.size());
  std::iota(all.begin(), all.end(), 0);
  return distill_loss(pred, expert, all, masked_argmax(expert, all), lambda);
}

DistillLoss distill_loss(std::span<const float> pred, std::span<const float> expert,
                         std::span<const std::int64_t> valid, std::int64_t expert_action,
                         double lambda, std::span<float> grad) {
  if (pred.size() != expert.size()) throw Error(ErrorCode::CapMismatch, "Q lengths differ");
  if (valid.empty()) throw Error(ErrorCode::NoValidAction, "distillation needs a valid action");
  DistillLoss out;
  double sq = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = static_cast<double>(pred[i]) - expert[i];
    sq += d * d;
  }
  out.l1 = std::sqrt(sq);
  const std::int64_t top = masked_argmax(pred, valid);
  out.l2 = static_cast<double>(pred[top]) - pred[expert_action];
  out.total = out.l1 + lambda * out.l2;
  if (!grad.empty()) {
    if (out.l1 > 0) {
      for (std::size_t i = 0; i < pred.size(); ++i) {
        grad[i] += static_cast<float>((static_cast<double>(pred[i]) - expert[i]) / out.l1);
      }
    }
    if (top != expert_action) {
      grad[top] += static_cast<float>(lambda);
      grad[expert_action] -= static_cast<float>(lambda);
    }
  }
  return out;
}

std::vector<ExpertRecord> collect_expert_records(std::span<const Expert> experts,
                                                 const Autoencoder& ae,
                                                 const env::ActionCaps& caps,
                                                 const ExpertDataConfig& config) {
  std::vector<ExpertRecord> out;
  for (std::size_t e = 0; e < experts.size(); ++e) {
    const Expert& ex = experts[e];
    const std::uint64_t seed = mix_seed(config.seed, static_cast<std::uint64_t>(ex.chair->id));
    for (int ep = 0; ep < config.episodes; ++ep) {
      const EpisodeResult roll = run_greedy_episode(*ex.net, ae, ex.chair, caps, seed, ep,
                                                    config.step);
      if (!roll.success) continue;
      // replay the same rollout to visit its states
      const std::uint64_t eseed = episode_seed(seed, ep);
      env::AssemblyState s = env::reset(ex.chair, eseed);
      env::StepParams step = config.step;
      step.planner.seed = mix_seed(config.step.planner.seed, eseed);
      const FeatureTable clean = encode_parts(ae, s);
      std::vector<FeatureTable> noisy;
      for (int c = 0; c < config.augment_copies; ++c) {
        noisy.push_back(encode_parts(ae, s, config.noise_sigma,
                                     mix_seed(eseed, static_cast<std::uint64_t>(c + 1))));
      }
      for (std::int64_t a : roll.actions) {
        ExpertRecord rec;
        rec.chair_id = ex.chair->id;
        rec.rollout = ep;
        rec.encoding = build_state_encoding(s, clean, caps);
        rec.q_expert = q_values(*ex.net, rec.encoding);
        rec.valid = expand_selections(env::valid_selections(s, caps), caps);
        rec.expert_action = a;
        for (const FeatureTable& f : noisy) {
          ExpertRecord aug = rec;
          aug.augmented = true;
          aug.encoding = build_state_encoding(s, f, caps);
          out.push_back(std::move(aug));
        }
        out.push_back(std::move(rec));
        s = env::step_action(s, caps, a, step).next_state;
      }
    }
  }
  return out;
}

DistillResult distill_train(std::span<const ExpertRecord> records, const DistillConfig& config) {
  if (records.empty()) throw Error(ErrorCode::ConfigError, "no expert records to distill");
  const QNetShape shape{static_cast<int>(records.front().encoding.size()), config.hidden,
                        static_cast<std::int64_t>(records.front().q_expert.size())};
  DistillResult result{QNet(shape, mix_seed(config.seed, 0x646973)), {}};
  QNet& net = result.net;
  Adam trunk_opt(net.trunk().parameter_count(), {config.lr});
  Adam head_opt(net.head_parameters().size(), {config.lr});
  std::vector<float> trunk_grad(net.trunk().parameter_count());
  std::vector<float> head_grad(net.head_parameters().size());

  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(mix_seed(config.seed, 0x73687566));
  const Eigen::Index in = shape.input;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    double sum = 0;
    for (std::size_t b = 0; b < order.size(); b += config.batch) {
      const std::size_t e = std::min(order.size(), b + config.batch);
      const Eigen::Index n = static_cast<Eigen::Index>(e - b);
      MatrixT<float> x(n, in);
      for (Eigen::Index i = 0; i < n; ++i) {
        x.row(i) = Eigen::Map<const Eigen::RowVectorXf>(records[order[b + i]].encoding.data(), in);
      }
      QNet::Tape tape;
      const MatrixT<float> h = net.hidden(x, tape);
      MatrixT<float> q = h * net.head_weight();
      q.rowwise() += net.head_bias().transpose();
      // row-major scratch so each sample's gradient row is contiguous
      Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> gq =
          Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>::Zero(n, q.cols());
      Eigen::RowVectorXf row(q.cols());
      for (Eigen::Index i = 0; i < n; ++i) {
        const ExpertRecord& r = records[order[b + i]];
        row = q.row(i);
        const DistillLoss l = distill_loss(std::span<const float>(row.data(), row.size()),
                                           r.q_expert, r.valid, r.expert_action, config.lambda,
                                           std::span<float>(gq.row(i).data(), gq.cols()));
        sum += l.total;
      }
      gq /= static_cast<float>(n);
      if (!std::isfinite(sum)) throw Error(ErrorCode::Diverged, "distillation loss is non-finite");
      std::fill(trunk_grad.begin(), trunk_grad.end(), 0.f);
      std::fill(head_grad.begin(), head_grad.end(), 0.f);
      net.backward_full(tape, h, gq, trunk_grad, head_grad);
      trunk_opt.step(net.trunk().parameters(), trunk_grad);
      head_opt.step(net.head_parameters(), head_grad);
    }
    result.epoch_loss.push_back(sum / static_cast<double>(records.size()));
  }
  return result;
}

double argmax_agreement(const QNet& net, std::span<const ExpertRecord> records) {
  if (records.empty()) return 0;
  std::size_t agree = 0;
  for (const ExpertRecord& r : records) {
    const std::vector<float> q = q_values(net, r.encoding);
    agree += masked_argmax(q, r.valid) == r.expert_action;
  }
  return static_cast<double>(agree) / static_cast<double>(records.size());
}

}  // namespace partforge::learn
