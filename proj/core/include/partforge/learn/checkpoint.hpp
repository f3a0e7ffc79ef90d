#pragma once

#include <map>
#include <string>

#include "partforge/env/actions.hpp"
#include "partforge/learn/autoencoder.hpp"
#include "partforge/learn/qnet.hpp"

namespace partforge::learn {

/// Free-form string metadata stored in a checkpoint header (seeds, build id,
/// training notes).
using CheckpointMeta = std::map<std::string, std::string>;

/// File layout: the 8 bytes "PFCKPT01", one JSON header line declaring the
/// float arrays that follow, then those arrays as little-endian float32.
void save_qnet(const std::string& path, const QNet& net, const env::ActionCaps& caps,
               const CheckpointMeta& meta = {});

struct LoadedQNet {
  QNet net;
  env::ActionCaps caps;
  CheckpointMeta meta;
};

/// Throws IoError for unreadable files and SchemaVersionMismatch for
/// malformed or mismatched content.
LoadedQNet load_qnet(const std::string& path);

void save_autoencoder(const std::string& path, const Autoencoder& ae,
                      const CheckpointMeta& meta = {});

struct LoadedAutoencoder {
  Autoencoder ae;
  CheckpointMeta meta;
};

LoadedAutoencoder load_autoencoder(const std::string& path);

}  // namespace partforge::learn
