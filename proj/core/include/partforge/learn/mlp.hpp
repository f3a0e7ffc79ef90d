#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "partforge/common/error.hpp"
#include "partforge/common/rng.hpp"

namespace partforge::learn {

template <typename Scalar>
using MatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Fully connected net with ReLU between layers. Rows of an input matrix are
/// samples. All weights and biases live in one flat array, layer by layer:
/// W (in x out, column-major) then b (out).
template <typename Scalar>
class BasicMlp {
 public:
  using Matrix = MatrixT<Scalar>;
  using Vector = VectorT<Scalar>;

  /// Layer inputs recorded by a forward pass; inputs[i] feeds layer i.
  struct Tape {
    std::vector<Matrix> inputs;
    Matrix output;
  };

  BasicMlp() = default;

  /// He-uniform weights, zero biases.
  BasicMlp(std::vector<int> sizes, bool relu_output, std::uint64_t seed)
      : sizes_(std::move(sizes)), relu_output_(relu_output) {
    if (sizes_.size() < 2) throw Error(ErrorCode::ConfigError, "an MLP needs at least two sizes");
    std::size_t n = 0;
    for (std::size_t i = 0; i + 1 < sizes_.size(); ++i) {
      offsets_.push_back(n);
      n += static_cast<std::size_t>(sizes_[i]) * sizes_[i + 1] + sizes_[i + 1];
    }
    params_.assign(n, Scalar(0));
    Rng rng(seed);
    for (int l = 0; l < layer_count(); ++l) {
      const double bound = std::sqrt(6.0 / sizes_[l]);
      auto w = weight(l);
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = Scalar(rng.uniform(-bound, bound));
      }
    }
  }

  const std::vector<int>& sizes() const { return sizes_; }
  bool relu_output() const { return relu_output_; }
  int layer_count() const { return static_cast<int>(sizes_.size()) - 1; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  std::size_t parameter_count() const { return params_.size(); }

  std::span<Scalar> parameters() { return params_; }
  std::span<const Scalar> parameters() const { return params_; }

  Eigen::Map<Matrix> weight(int l) {
    return Eigen::Map<Matrix>(params_.data() + offsets_[l], sizes_[l], sizes_[l + 1]);
  }
  Eigen::Map<const Matrix> weight(int l) const {
    return Eigen::Map<const Matrix>(params_.data() + offsets_[l], sizes_[l], sizes_[l + 1]);
  }
  Eigen::Map<const Vector> bias(int l) const {
    return Eigen::Map<const Vector>(
        params_.data() + offsets_[l] + static_cast<std::size_t>(sizes_[l]) * sizes_[l + 1],
        sizes_[l + 1]);
  }

  Matrix forward(const Matrix& x) const {
    Matrix h = x;
    for (int l = 0; l < layer_count(); ++l) h = layer(l, h);
    return h;
  }

  Matrix forward(const Matrix& x, Tape& tape) const {
    tape.inputs.clear();
    tape.inputs.push_back(x);
    for (int l = 0; l < layer_count(); ++l) {
      Matrix h = layer(l, tape.inputs.back());
      if (l + 1 < layer_count()) {
        tape.inputs.push_back(std::move(h));
      } else {
        tape.output = std::move(h);
      }
    }
    return tape.output;
  }

  /// Adds parameter gradients into `grad` (same layout as parameters()) and
  /// returns the gradient with respect to the input.
  Matrix backward(const Tape& tape, Matrix g, std::span<Scalar> grad) const {
    for (int l = layer_count() - 1; l >= 0; --l) {
      const Matrix& out = l + 1 < layer_count() ? tape.inputs[l + 1] : tape.output;
      if (l + 1 < layer_count() || relu_output_) {
        g = g.cwiseProduct((out.array() > Scalar(0)).template cast<Scalar>().matrix());
      }
      Eigen::Map<Matrix> gw(grad.data() + offsets_[l], sizes_[l], sizes_[l + 1]);
      Eigen::Map<Vector> gb(
          grad.data() + offsets_[l] + static_cast<std::size_t>(sizes_[l]) * sizes_[l + 1],
          sizes_[l + 1]);
      gw.noalias() += tape.inputs[l].transpose() * g;
      gb += g.colwise().sum().transpose();
      if (l > 0) {
        g = g * weight(l).transpose();
      } else {
        return g * weight(l).transpose();
      }
    }
    return g;
  }

  template <typename Other>
  BasicMlp<Other> cast() const {
    BasicMlp<Other> out;
    out.sizes_ = sizes_;
    out.relu_output_ = relu_output_;
    out.offsets_ = offsets_;
    out.params_.assign(params_.begin(), params_.end());
    return out;
  }

  bool operator==(const BasicMlp&) const = default;

 private:
  template <typename>
  friend class BasicMlp;

  Matrix layer(int l, const Matrix& x) const {
    Matrix h = x * weight(l);
    h.rowwise() += bias(l).transpose();
    if (l + 1 < layer_count() || relu_output_) h = h.cwiseMax(Scalar(0));
    return h;
  }

  std::vector<int> sizes_;
  bool relu_output_ = false;
  std::vector<std::size_t> offsets_;
  std::vector<Scalar> params_;
};

using Mlp = BasicMlp<float>;

}  // namespace partforge::learn
