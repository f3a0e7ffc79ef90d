#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "partforge/common/error.hpp"

namespace partforge::cli {

struct Command {
  std::string name;
  std::string description;
  std::vector<KeySpec> keys;
  /// Key that receives positional arguments, comma-joined; empty if none.
  std::string positional_key;
  std::function<void(const RunConfig&)> run;
};

const std::vector<Command>& commands();
/// Throws ConfigError for an unknown name.
const Command& find_command(const std::string& name);

/// 2 for configuration and cap errors, 3 for divergence, 4 for I/O and
/// schema errors, 1 otherwise.
int exit_code(ErrorCode code);

/// Header lines stamped into artifacts: build id and the resolved config
/// without the output location.
std::vector<std::string> artifact_header(const RunConfig& config);

/// Writes to stderr with a "[partforge]" prefix; safe across threads.
void log_line(const std::string& message);

}  // namespace partforge::cli
