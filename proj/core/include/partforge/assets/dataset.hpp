#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "partforge/assets/chair.hpp"
#include "partforge/assets/generator.hpp"

namespace partforge::assets {

inline constexpr int kSchemaVersion = 1;

struct DatasetManifest {
  std::vector<int> easy_train;
  std::vector<int> hard_train;
  std::vector<int> test;
  int n_train = 0;
  int n_test = 0;
  std::uint64_t seed = 0;
  /// Caps the chairs were generated under.
  int max_parts = kMaxPartsPerChair;
  int max_connections = kMaxConnectionsPerPart;

  bool operator==(const DatasetManifest&) const = default;
};

struct Dataset {
  DatasetManifest manifest;
  std::vector<ChairAsset> chairs;  // indexed by chair id

  const ChairAsset& chair(int id) const;
};

struct DatasetSpec {
  int n_chairs = 40;
  double test_fraction = 0.2;
  double hard_fraction = 0.25;
  std::uint64_t seed = 0;
  GeneratorOptions generator;
};

/// Generates and annotates n chairs. Ids run easy-train, hard-train, test;
/// chair id i is generated from mix_seed(seed, i).
Dataset make_dataset(const DatasetSpec& spec);

/// Writes manifest.json, chair_<id>.json and part_<id>_<x>.obj into dir.
void save_dataset(const Dataset& data, const std::string& dir);
/// Throws IoError for missing files, SchemaVersionMismatch for bad headers.
Dataset load_dataset(const std::string& dir);

std::string chair_to_json(const ChairAsset& chair);
std::string manifest_to_json(const DatasetManifest& manifest);

}  // namespace partforge::assets
