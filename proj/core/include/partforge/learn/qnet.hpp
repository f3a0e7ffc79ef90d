#pragma once

#include <span>
#include <utility>
#include <vector>

#include "partforge/learn/mlp.hpp"

namespace partforge::learn {

struct QNetShape {
  int input = 0;
  std::vector<int> hidden{1024, 512};
  std::int64_t actions = 0;
  bool operator==(const QNetShape&) const = default;
};

/// Q-network: a ReLU trunk and a linear head with one output per padded
/// action. The head is kept apart from the trunk so single entries can be
/// evaluated and updated without touching the whole output layer.
/// Head layout: W (hidden x actions, column-major) then b (actions).
template <typename Scalar>
class BasicQNet {
 public:
  using Matrix = MatrixT<Scalar>;
  using Vector = VectorT<Scalar>;
  using Tape = typename BasicMlp<Scalar>::Tape;

  BasicQNet() = default;
  BasicQNet(const QNetShape& shape, std::uint64_t seed) : shape_(shape) {
    if (shape.input < 1 || shape.actions < 1 || shape.hidden.empty()) {
      throw Error(ErrorCode::ConfigError, "Q-network needs inputs, hidden layers and actions");
    }
    std::vector<int> sizes{shape.input};
    sizes.insert(sizes.end(), shape.hidden.begin(), shape.hidden.end());
    trunk_ = BasicMlp<Scalar>(sizes, true, mix_seed(seed, 1));
    const int h = shape.hidden.back();
    head_.assign(static_cast<std::size_t>(h) * shape.actions + shape.actions, Scalar(0));
    Rng rng(mix_seed(seed, 2));
    const double bound = std::sqrt(6.0 / h);
    for (std::size_t i = 0; i < static_cast<std::size_t>(h) * shape.actions; ++i) {
      head_[i] = Scalar(rng.uniform(-bound, bound) * 0.1);
    }
  }

  const QNetShape& shape() const { return shape_; }
  int input_size() const { return shape_.input; }
  int hidden_size() const { return shape_.hidden.back(); }
  std::int64_t action_count() const { return shape_.actions; }

  BasicMlp<Scalar>& trunk() { return trunk_; }
  const BasicMlp<Scalar>& trunk() const { return trunk_; }
  std::span<Scalar> head_parameters() { return head_; }
  std::span<const Scalar> head_parameters() const { return head_; }

  Eigen::Map<const Matrix> head_weight() const {
    return Eigen::Map<const Matrix>(head_.data(), hidden_size(), shape_.actions);
  }
  Eigen::Map<const Vector> head_bias() const {
    return Eigen::Map<const Vector>(
        head_.data() + static_cast<std::size_t>(hidden_size()) * shape_.actions, shape_.actions);
  }

  /// Index ranges of the head parameters that feed one action.
  std::array<std::pair<std::size_t, std::size_t>, 2> head_ranges(std::int64_t action) const {
    const std::size_t h = hidden_size();
    const std::size_t a = static_cast<std::size_t>(action);
    const std::size_t bias = h * static_cast<std::size_t>(shape_.actions) + a;
    return {{{a * h, (a + 1) * h}, {bias, bias + 1}}};
  }

  Matrix hidden(const Matrix& x) const { return trunk_.forward(x); }
  Matrix hidden(const Matrix& x, Tape& tape) const { return trunk_.forward(x, tape); }

  Matrix forward(const Matrix& x) const {
    Matrix q = hidden(x) * head_weight();
    q.rowwise() += head_bias().transpose();
    return q;
  }

  /// Q of one action for row `row` of a hidden matrix.
  Scalar value(const Matrix& h, Eigen::Index row, std::int64_t action) const {
    return h.row(row).dot(head_weight().col(action)) + head_bias()(action);
  }

  /// Gradient of sum_ij grad_q(i, j) * Q(i, j).
  void backward_full(const Tape& tape, const Matrix& h, const Matrix& grad_q,
                     std::span<Scalar> trunk_grad, std::span<Scalar> head_grad) const {
    const std::size_t hs = hidden_size();
    Eigen::Map<Matrix> gw(head_grad.data(), hs, shape_.actions);
    Eigen::Map<Vector> gb(head_grad.data() + hs * shape_.actions, shape_.actions);
    gw.noalias() += h.transpose() * grad_q;
    gb += grad_q.colwise().sum().transpose();
    trunk_.backward(tape, grad_q * head_weight().transpose(), trunk_grad);
  }

  /// Gradient of sum_i grad_values[i] * Q(i, actions[i]); touches only the
  /// head columns of the given actions.
  void backward_sparse(const Tape& tape, const Matrix& h, std::span<const std::int64_t> actions,
                       std::span<const Scalar> grad_values, std::span<Scalar> trunk_grad,
                       std::span<Scalar> head_grad) const {
    const std::size_t hs = hidden_size();
    Matrix gh(h.rows(), h.cols());
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      const std::int64_t a = actions[i];
      const Scalar g = grad_values[i];
      Eigen::Map<Vector> col(head_grad.data() + static_cast<std::size_t>(a) * hs, hs);
      col += g * h.row(i).transpose();
      head_grad[hs * shape_.actions + a] += g;
      gh.row(i) = g * head_weight().col(a).transpose();
    }
    trunk_.backward(tape, gh, trunk_grad);
  }

  template <typename Other>
  BasicQNet<Other> cast() const {
    BasicQNet<Other> out;
    out.shape_ = shape_;
    out.trunk_ = trunk_.template cast<Other>();
    out.head_.assign(head_.begin(), head_.end());
    return out;
  }

  bool operator==(const BasicQNet&) const = default;

 private:
  template <typename>
  friend class BasicQNet;

  QNetShape shape_;
  BasicMlp<Scalar> trunk_;
  std::vector<Scalar> head_;
};

using QNet = BasicQNet<float>;

}  // namespace partforge::learn
