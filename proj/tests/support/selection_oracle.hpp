#pragma once

#include <array>

#include "partforge/env/state.hpp"

namespace partforge::testing {

// Independent check of (u, v, k, l): some part equivalent to u has its slot k
// paired with slot l of v in the ground-truth adjacency list.
inline bool oracle_valid(const env::AssemblyState& s, int u, int v, int k, int l) {
  const assets::ChairAsset& c = *s.chair;
  const int n = c.part_count();
  if (u < 0 || v < 0 || u >= n || v >= n || u == v) return false;
  if (s.group[u] == s.group[v]) return false;
  if (k < 0 || k >= c.connection_count(u) || l < 0 || l >= c.connection_count(v)) return false;
  if (s.used[u][k] || s.used[v][l]) return false;
  for (const assets::MatePair& m : c.gt_adjacency) {
    for (const auto& [a, ka, b, lb] : {std::array{m.u, m.k, m.v, m.l},
                                       std::array{m.v, m.l, m.u, m.k}}) {
      if (b == v && lb == l && ka == k &&
          c.parts[a].equivalence_class == c.parts[u].equivalence_class) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace partforge::testing
