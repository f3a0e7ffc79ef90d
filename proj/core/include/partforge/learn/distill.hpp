#pragma once

#include <memory>
#include <vector>

#include "partforge/learn/policy.hpp"

namespace partforge::learn {

inline constexpr double kDistillLambda = 50.0;

struct DistillLoss {
  double l1 = 0;  // Euclidean norm of the Q difference
  double l2 = 0;  // gap between the predicted max and the prediction at the expert's choice
  double total = 0;
};

/// Loss against the expert's unrestricted argmax.
DistillLoss distill_loss(std::span<const float> pred, std::span<const float> expert,
                         double lambda = kDistillLambda);

/// Loss with the max restricted to `valid` and the expert's choice given.
/// When `grad` is non-empty it receives dL/dpred.
DistillLoss distill_loss(std::span<const float> pred, std::span<const float> expert,
                         std::span<const std::int64_t> valid, std::int64_t expert_action,
                         double lambda, std::span<float> grad = {});

struct ExpertRecord {
  int chair_id = 0;
  int rollout = 0;
  bool augmented = false;
  std::vector<float> encoding;
  std::vector<float> q_expert;
  std::vector<std::int64_t> valid;  // valid actions, expanded
  std::int64_t expert_action = 0;
};

struct Expert {
  std::shared_ptr<const assets::ChairAsset> chair;
  std::shared_ptr<const QNet> net;
};

struct ExpertDataConfig {
  int episodes = 5;
  int augment_copies = 4;
  double noise_sigma = 0.01;
  std::uint64_t seed = 0;
  env::StepParams step;
};

/// States along the experts' successful greedy rollouts, labelled with the
/// expert Q vector, plus copies re-encoded from noisy point clouds.
std::vector<ExpertRecord> collect_expert_records(std::span<const Expert> experts,
                                                 const Autoencoder& ae,
                                                 const env::ActionCaps& caps,
                                                 const ExpertDataConfig& config);

struct DistillConfig {
  int epochs = 60;
  int batch = 32;
  double lr = 1e-3;
  double lambda = kDistillLambda;
  std::vector<int> hidden{1024, 512};
  std::uint64_t seed = 0;
};

struct DistillResult {
  QNet net;
  std::vector<double> epoch_loss;
};

/// Adam on the mean distillation loss. Throws Diverged.
DistillResult distill_train(std::span<const ExpertRecord> records, const DistillConfig& config);

/// Fraction of records where the masked argmax of the net equals the expert's action.
double argmax_agreement(const QNet& net, std::span<const ExpertRecord> records);

}  // namespace partforge::learn
