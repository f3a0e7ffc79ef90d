#include "partforge/common/error.hpp"

namespace partforge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::TooManyConnections: return "TooManyConnections";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::PlacementFailed: return "PlacementFailed";
    case ErrorCode::InvalidQuery: return "InvalidQuery";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::NoValidAction: return "NoValidAction";
    case ErrorCode::CapMismatch: return "CapMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace partforge
