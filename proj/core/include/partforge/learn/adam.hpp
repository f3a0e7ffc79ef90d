#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace partforge::learn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam over one flat parameter array. `step_ranges` updates only the given
/// [begin, end) index ranges, leaving the moments elsewhere untouched; bias
/// correction uses the shared step count.
template <typename Scalar>
class BasicAdam {
 public:
  BasicAdam() = default;
  BasicAdam(std::size_t n, AdamConfig config) : config_(config), m_(n, 0), v_(n, 0) {}

  const AdamConfig& config() const { return config_; }
  std::int64_t steps() const { return t_; }

  void step(std::span<Scalar> params, std::span<const Scalar> grad) {
    begin_step();
    update(params, grad, 0, params.size());
  }

  void step_ranges(std::span<Scalar> params, std::span<const Scalar> grad,
                   std::span<const std::pair<std::size_t, std::size_t>> ranges) {
    begin_step();
    for (const auto& [b, e] : ranges) update(params, grad, b, e);
  }

 private:
  void begin_step() {
    ++t_;
    c1_ = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
    c2_ = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  }

  void update(std::span<Scalar> p, std::span<const Scalar> g, std::size_t b, std::size_t e) {
    const Scalar b1 = Scalar(config_.beta1), b2 = Scalar(config_.beta2);
    const Scalar lr = Scalar(config_.lr * std::sqrt(c2_) / c1_);
    const Scalar eps = Scalar(config_.eps * std::sqrt(c2_));
    for (std::size_t i = b; i < e; ++i) {
      m_[i] = b1 * m_[i] + (1 - b1) * g[i];
      v_[i] = b2 * v_[i] + (1 - b2) * g[i] * g[i];
      p[i] -= lr * m_[i] / (std::sqrt(v_[i]) + eps);
    }
  }

  AdamConfig config_;
  std::vector<Scalar> m_, v_;
  std::int64_t t_ = 0;
  double c1_ = 1, c2_ = 1;
};

using Adam = BasicAdam<float>;

}  // namespace partforge::learn
