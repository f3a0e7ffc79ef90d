#pragma once

#include <cstdint>

#include "partforge/assets/chair.hpp"

namespace partforge::assets {

struct GeneratorOptions {
  /// Hard layouts with more parts or connections per part are not drawn.
  int max_parts = 12;
  int max_connections = kMaxConnectionsPerPart;
};

/// Seat-and-legs chairs (3-5 parts) for Easy, chairs with backs and
/// stretchers (6-12 parts) for Hard. Returned unannotated: parts carry
/// meshes and hulls but no connections. Throws GenerationFailed.
ChairAsset generate_chair(std::uint64_t seed, Difficulty difficulty,
                          const GeneratorOptions& options = {});

/// Part count of every hard layout the options allow, in layout order.
std::vector<int> hard_layout_sizes(const GeneratorOptions& options);

}  // namespace partforge::assets
