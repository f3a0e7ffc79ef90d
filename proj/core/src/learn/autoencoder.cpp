#include "partforge/learn/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "partforge/geom/mesh.hpp"
#include "partforge/geom/sampling.hpp"
#include "partforge/learn/adam.hpp"

namespace partforge::learn {

geom::PointCloud normalize_cloud(geom::PointCloud cloud) {
  const geom::Aabb box = geom::bounding_box(cloud);
  const double extent = box.extents().maxCoeff();
  const double scale = extent > 0 ? 1.0 / extent : 1.0;
  const geom::Vec3 c = box.center();
  for (geom::Vec3& p : cloud) p = (p - c) * scale;
  return cloud;
}

MatrixT<float> to_matrix(const geom::PointCloud& cloud) {
  MatrixT<float> m(static_cast<Eigen::Index>(cloud.size()), 3);
  for (std::size_t i = 0; i < cloud.size(); ++i) m.row(i) = cloud[i].cast<float>().transpose();
  return m;
}

geom::PointCloud part_cloud(const assets::Part& part, const geom::Pose6D& pose, int points,
                            std::uint64_t seed, double noise_sigma, std::uint64_t noise_seed) {
  geom::PointCloud cloud =
      normalize_cloud(geom::sample_point_cloud(geom::transformed(part.mesh, pose), points, seed));
  if (noise_sigma > 0) {
    Rng rng(noise_seed);
    for (geom::Vec3& p : cloud) {
      for (int c = 0; c < 3; ++c) p(c) += noise_sigma * rng.normal();
    }
  }
  return cloud;
}

std::vector<geom::PointCloud> training_clouds(std::span<const assets::ChairAsset> chairs,
                                              int points, std::uint64_t seed) {
  std::vector<geom::PointCloud> out;
  for (const assets::ChairAsset& c : chairs) {
    for (const assets::Part& p : c.parts) {
      out.push_back(part_cloud(p, c.gt_poses[p.id], points, seed));
    }
  }
  return out;
}

namespace {

std::vector<MatrixT<float>> gather(std::span<const geom::PointCloud> clouds,
                                   std::span<const std::size_t> ids) {
  std::vector<MatrixT<float>> out;
  out.reserve(ids.size());
  for (std::size_t i : ids) out.push_back(to_matrix(clouds[i]));
  return out;
}

}  // namespace

double ae_mean_loss(const Autoencoder& ae, std::span<const geom::PointCloud> clouds) {
  double total = 0;
  constexpr std::size_t kChunk = 64;
  for (std::size_t b = 0; b < clouds.size(); b += kChunk) {
    const std::size_t e = std::min(clouds.size(), b + kChunk);
    std::vector<std::size_t> ids(e - b);
    std::iota(ids.begin(), ids.end(), b);
    total += static_cast<double>(ae.loss(gather(clouds, ids))) * static_cast<double>(e - b);
  }
  return total / static_cast<double>(clouds.size());
}

AeTrainResult ae_train(std::span<const geom::PointCloud> clouds, const AeTrainConfig& config) {
  if (clouds.empty()) throw Error(ErrorCode::ConfigError, "no training clouds");
  if (config.batch < 1 || config.epochs < 0) throw Error(ErrorCode::ConfigError, "bad AE schedule");
  AeTrainResult result{Autoencoder(config.shape, config.seed), 0.0, 0.0, {}};
  Autoencoder& ae = result.model;
  Adam enc_opt(ae.encoder().parameter_count(), {config.lr});
  Adam dec_opt(ae.decoder().parameter_count(), {config.lr});
  std::vector<float> enc_grad(ae.encoder().parameter_count());
  std::vector<float> dec_grad(ae.decoder().parameter_count());

  result.initial_loss = ae_mean_loss(ae, clouds);
  std::vector<std::size_t> order(clouds.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(mix_seed(config.seed, 3));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    double sum = 0;
    for (std::size_t b = 0; b < order.size(); b += config.batch) {
      const std::size_t e = std::min(order.size(), b + config.batch);
      std::fill(enc_grad.begin(), enc_grad.end(), 0.f);
      std::fill(dec_grad.begin(), dec_grad.end(), 0.f);
      const float loss = ae.loss(gather(clouds, std::span(order).subspan(b, e - b)), enc_grad,
                                 dec_grad);
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::Diverged, "autoencoder loss became non-finite at epoch " +
                                             std::to_string(epoch));
      }
      sum += static_cast<double>(loss) * static_cast<double>(e - b);
      enc_opt.step(ae.encoder().parameters(), enc_grad);
      dec_opt.step(ae.decoder().parameters(), dec_grad);
    }
    result.epoch_losses.push_back(sum / static_cast<double>(order.size()));
  }
  result.final_loss = ae_mean_loss(ae, clouds);
  return result;
}

}  // namespace partforge::learn
