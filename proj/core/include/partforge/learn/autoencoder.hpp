#pragma once

#include <span>
#include <vector>

#include "partforge/assets/chair.hpp"
#include "partforge/learn/chamfer.hpp"
#include "partforge/learn/mlp.hpp"

namespace partforge::learn {

inline constexpr int kFeatureSize = 128;
inline constexpr int kCloudPoints = 256;

struct AeShape {
  std::vector<int> encoder{3, 64, 128, kFeatureSize};
  std::vector<int> decoder_hidden{256};
  int points = kCloudPoints;
  bool operator==(const AeShape&) const = default;
};

/// Point-cloud autoencoder: a shared per-point MLP, max over points, and an
/// MLP decoding the feature back to a fixed number of points.
template <typename Scalar>
class BasicAutoencoder {
 public:
  using Matrix = MatrixT<Scalar>;
  using Vector = VectorT<Scalar>;

  BasicAutoencoder() = default;
  BasicAutoencoder(const AeShape& shape, std::uint64_t seed) : shape_(shape) {
    std::vector<int> dec{shape.encoder.back()};
    dec.insert(dec.end(), shape.decoder_hidden.begin(), shape.decoder_hidden.end());
    dec.push_back(3 * shape.points);
    encoder_ = BasicMlp<Scalar>(shape.encoder, false, mix_seed(seed, 1));
    decoder_ = BasicMlp<Scalar>(dec, false, mix_seed(seed, 2));
  }

  const AeShape& shape() const { return shape_; }
  int feature_size() const { return encoder_.output_size(); }
  BasicMlp<Scalar>& encoder() { return encoder_; }
  const BasicMlp<Scalar>& encoder() const { return encoder_; }
  BasicMlp<Scalar>& decoder() { return decoder_; }
  const BasicMlp<Scalar>& decoder() const { return decoder_; }

  /// Cloud rows are points; any number of points.
  Vector encode(const Matrix& cloud) const {
    return encoder_.forward(cloud).colwise().maxCoeff().transpose();
  }

  /// One row of 3 * points coordinates per feature row.
  Matrix decode(const Matrix& features) const { return decoder_.forward(features); }

  Matrix reconstruct(const Matrix& cloud) const {
    return unflatten(decode(encode(cloud).transpose()).row(0));
  }

  /// Mean Chamfer reconstruction loss. Gradients are added into the spans
  /// when they are non-empty.
  Scalar loss(std::span<const Matrix> clouds, std::span<Scalar> encoder_grad = {},
              std::span<Scalar> decoder_grad = {}) const {
    const bool want_grad = !encoder_grad.empty();
    const Eigen::Index batch = static_cast<Eigen::Index>(clouds.size());
    const int f = feature_size();
    std::vector<typename BasicMlp<Scalar>::Tape> enc_tapes(clouds.size());
    std::vector<std::vector<Eigen::Index>> winners(clouds.size(), std::vector<Eigen::Index>(f));
    Matrix features(batch, f);
    for (Eigen::Index b = 0; b < batch; ++b) {
      const Matrix h = encoder_.forward(clouds[b], enc_tapes[b]);
      for (int j = 0; j < f; ++j) features(b, j) = h.col(j).maxCoeff(&winners[b][j]);
    }
    typename BasicMlp<Scalar>::Tape dec_tape;
    const Matrix flat = decoder_.forward(features, dec_tape);
    Matrix grad_flat(batch, flat.cols());
    Scalar total = 0;
    for (Eigen::Index b = 0; b < batch; ++b) {
      Matrix g;
      total += chamfer_rows<Scalar>(unflatten(flat.row(b)), clouds[b], want_grad ? &g : nullptr);
      if (want_grad) {
        for (Eigen::Index p = 0; p < g.rows(); ++p) {
          for (int c = 0; c < 3; ++c) grad_flat(b, 3 * p + c) = g(p, c) / Scalar(batch);
        }
      }
    }
    if (want_grad) {
      const Matrix grad_features = decoder_.backward(dec_tape, grad_flat, decoder_grad);
      for (Eigen::Index b = 0; b < batch; ++b) {
        Matrix gh = Matrix::Zero(clouds[b].rows(), f);
        for (int j = 0; j < f; ++j) gh(winners[b][j], j) = grad_features(b, j);
        encoder_.backward(enc_tapes[b], gh, encoder_grad);
      }
    }
    return total / Scalar(batch);
  }

  template <typename Other>
  BasicAutoencoder<Other> cast() const {
    BasicAutoencoder<Other> out;
    out.shape_ = shape_;
    out.encoder_ = encoder_.template cast<Other>();
    out.decoder_ = decoder_.template cast<Other>();
    return out;
  }

  bool operator==(const BasicAutoencoder&) const = default;

 private:
  template <typename>
  friend class BasicAutoencoder;

  static Matrix unflatten(const Matrix& row) {
    const Eigen::Index m = row.cols() / 3;
    Matrix out(m, 3);
    for (Eigen::Index p = 0; p < m; ++p) {
      for (int c = 0; c < 3; ++c) out(p, c) = row(0, 3 * p + c);
    }
    return out;
  }

  AeShape shape_;
  BasicMlp<Scalar> encoder_;
  BasicMlp<Scalar> decoder_;
};

using Autoencoder = BasicAutoencoder<float>;

/// Translates the cloud's bounding-box center to the origin and scales its
/// largest extent to 1.
geom::PointCloud normalize_cloud(geom::PointCloud cloud);

MatrixT<float> to_matrix(const geom::PointCloud& cloud);

/// Normalized surface sample of a part at `pose`, with optional Gaussian
/// jitter added after normalization.
geom::PointCloud part_cloud(const assets::Part& part, const geom::Pose6D& pose, int points,
                            std::uint64_t seed, double noise_sigma = 0.0,
                            std::uint64_t noise_seed = 0);

/// Normalized clouds of every part at its assembled pose.
std::vector<geom::PointCloud> training_clouds(std::span<const assets::ChairAsset> chairs,
                                              int points, std::uint64_t seed);

struct AeTrainConfig {
  int epochs = 100;
  int batch = 32;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  AeShape shape;
};

struct AeTrainResult {
  Autoencoder model;
  double initial_loss = 0;
  double final_loss = 0;
  std::vector<double> epoch_losses;
};

/// Adam on the Chamfer loss. Throws Diverged on a non-finite loss.
AeTrainResult ae_train(std::span<const geom::PointCloud> clouds, const AeTrainConfig& config);

/// Mean loss over all clouds, in batches.
double ae_mean_loss(const Autoencoder& ae, std::span<const geom::PointCloud> clouds);

}  // namespace partforge::learn
