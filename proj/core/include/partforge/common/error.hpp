#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace partforge {

enum class ErrorCode {
  DegenerateGeometry,
  GenerationFailed,
  TooManyConnections,
  IoError,
  SchemaVersionMismatch,
  PlacementFailed,
  InvalidQuery,
  Diverged,
  CapExceeded,
  NoValidAction,
  CapMismatch,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace partforge
