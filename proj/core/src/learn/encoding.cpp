#include "partforge/learn/encoding.hpp"

#include <algorithm>

namespace partforge::learn {

namespace {
constexpr std::uint64_t kCloudSeed = 0x636c6f7564;
}

VectorT<float> encode_part(const Autoencoder& ae, const assets::Part& part,
                           const geom::Pose6D& pose, double noise_sigma, std::uint64_t noise_seed) {
  return ae.encode(to_matrix(
      part_cloud(part, pose, ae.shape().points, kCloudSeed, noise_sigma, noise_seed)));
}

FeatureTable encode_parts(const Autoencoder& ae, const env::AssemblyState& initial,
                          double noise_sigma, std::uint64_t noise_seed) {
  FeatureTable out;
  for (int x = 0; x < initial.part_count(); ++x) {
    out.push_back(encode_part(ae, initial.chair->parts[x], initial.poses[x], noise_sigma,
                              mix_seed(noise_seed, static_cast<std::uint64_t>(x))));
  }
  return out;
}

std::array<float, kGraspSummarySize> grasp_summary(const assets::Part& part) {
  std::array<float, kGraspSummarySize> out{};
  for (int r = 0; r < 2; ++r) {
    const assets::GraspRegion& g = part.grasp_regions[r];
    for (int c = 0; c < 3; ++c) {
      out[6 * r + c] = static_cast<float>(g.center(c));
      out[6 * r + 3 + c] = static_cast<float>(g.approach_dirs[0](c));
    }
  }
  return out;
}

int encoding_size(const env::ActionCaps& caps, int feature_size) {
  return caps.parts * (feature_size + kGraspSummarySize + kPoseSize) +
         caps.parts * caps.parts * kPoseSize;
}

std::vector<float> build_state_encoding(const env::AssemblyState& s, const FeatureTable& features,
                                        const env::ActionCaps& caps) {
  env::check_caps(*s.chair, caps);
  const int f = features.empty() ? kFeatureSize : static_cast<int>(features.front().size());
  const int slot = f + kGraspSummarySize + kPoseSize;
  std::vector<float> out(encoding_size(caps, f), 0.f);
  for (int x = 0; x < s.part_count(); ++x) {
    float* dst = out.data() + static_cast<std::size_t>(x) * slot;
    std::copy_n(features[x].data(), f, dst);
    const auto g = grasp_summary(s.chair->parts[x]);
    std::copy(g.begin(), g.end(), dst + f);
    const geom::Pose6D& p = s.poses[x];
    const double pose[kPoseSize] = {p.tx, p.ty, p.tz, p.rx, p.ry, p.rz};
    for (int i = 0; i < kPoseSize; ++i) dst[f + kGraspSummarySize + i] = static_cast<float>(pose[i]);
  }
  float* tensor = out.data() + static_cast<std::size_t>(caps.parts) * slot;
  for (int u = 0; u < s.part_count(); ++u) {
    for (int v = 0; v < s.part_count(); ++v) {
      if (!s.tensor.connected(u, v)) continue;
      const geom::Pose6D c = s.tensor.at(u, v);
      const double vals[kPoseSize] = {c.tx, c.ty, c.tz, c.rx, c.ry, c.rz};
      float* dst = tensor + (static_cast<std::size_t>(u) * caps.parts + v) * kPoseSize;
      for (int i = 0; i < kPoseSize; ++i) dst[i] = static_cast<float>(vals[i]);
    }
  }
  return out;
}

}  // namespace partforge::learn
