#pragma once

#include <cstdint>
#include <vector>

#include "partforge/env/state.hpp"

namespace partforge::env {

/// Padded action-space caps: parts, connections per part, and the number of
/// values of the trailing component (6 orientations, or 64 grasp pairs).
struct ActionCaps {
  int parts = 8;
  int connections = 6;
  int orientations = 6;

  std::int64_t selection_count() const {
    return std::int64_t{parts} * parts * connections * connections;
  }
  std::int64_t action_count() const { return selection_count() * orientations; }
  bool operator==(const ActionCaps&) const = default;
};

inline constexpr int kGraspChoices = 8;  // 2 regions x 4 directions

struct ActionOC {
  int u = 0, v = 0, k = 0, l = 0, w = 4;
  bool operator==(const ActionOC&) const = default;
};

struct ActionFull {
  int u = 0, v = 0, k = 0, l = 0, g_a = 0, g_b = 0;
  bool operator==(const ActionFull&) const = default;
};

std::int64_t encode_selection(const ActionCaps& caps, int u, int v, int k, int l);
std::int64_t encode(const ActionCaps& caps, const ActionOC& a);
ActionOC decode_oc(const ActionCaps& caps, std::int64_t index);
/// Full-setting layout: trailing component is g_a * 8 + g_b.
std::int64_t encode(const ActionCaps& caps, const ActionFull& a);
ActionFull decode_full(const ActionCaps& caps, std::int64_t index);

/// Selection indices (u, v, k, l) in range, u != v, different groups and
/// both slots unused, ascending.
std::vector<std::int64_t> valid_selections(const AssemblyState& s, const ActionCaps& caps);

/// Boolean mask over the padded action space; the trailing component is
/// unconstrained.
std::vector<char> valid_action_mask(const AssemblyState& s, const ActionCaps& caps);

/// Throws CapExceeded if the chair does not fit the caps.
void check_caps(const ChairAsset& chair, const ActionCaps& caps);

}  // namespace partforge::env
