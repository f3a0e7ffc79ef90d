#pragma once

#include <vector>

#include "partforge/env/actions.hpp"
#include "partforge/learn/autoencoder.hpp"

namespace partforge::learn {

inline constexpr int kGraspSummarySize = 12;
inline constexpr int kPoseSize = 6;

/// Per-part autoencoder features, indexed by part id.
using FeatureTable = std::vector<VectorT<float>>;

/// Encoder output for the part's normalized surface sample at `pose`.
VectorT<float> encode_part(const Autoencoder& ae, const assets::Part& part,
                           const geom::Pose6D& pose, double noise_sigma = 0.0,
                           std::uint64_t noise_seed = 0);

/// Features of every part at its pose in `initial`.
FeatureTable encode_parts(const Autoencoder& ae, const env::AssemblyState& initial,
                          double noise_sigma = 0.0, std::uint64_t noise_seed = 0);

/// Region centers and first approach directions in the part frame.
std::array<float, kGraspSummarySize> grasp_summary(const assets::Part& part);

/// Per part slot [feature | grasp summary | pose], then the connection
/// tensor padded to caps.parts^2 x 6.
int encoding_size(const env::ActionCaps& caps, int feature_size = kFeatureSize);

/// Absent slots are exactly zero. Throws CapExceeded when the chair does not fit.
std::vector<float> build_state_encoding(const env::AssemblyState& s, const FeatureTable& features,
                                        const env::ActionCaps& caps);

}  // namespace partforge::learn
