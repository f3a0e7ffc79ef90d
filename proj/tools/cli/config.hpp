#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "partforge/env/actions.hpp"

namespace partforge::cli {

struct KeySpec {
  std::string key;
  std::string default_value;
  std::string help;
};

/// Command settings as string key/value pairs. Values come from defaults,
/// then a config file, then command-line flags; later sources win. Keys a
/// command does not declare are rejected with ConfigError.
class RunConfig {
 public:
  explicit RunConfig(const std::vector<KeySpec>& keys);

  bool knows(const std::string& key) const { return values_.contains(key); }
  void set(const std::string& key, const std::string& value);
  /// Parses "key=value" (surrounding blanks trimmed).
  void set_assignment(const std::string& assignment);
  /// Line-based "key=value" file; blank lines and lines starting with '#'
  /// are skipped. Throws IoError when unreadable.
  void load_file(const std::string& path);

  const std::string& str(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::uint64_t seed(const std::string& key) const;
  double real(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<int> int_list(const std::string& key) const;
  env::ActionCaps caps(const std::string& key) const;

  /// "key=value" lines in key order.
  std::vector<std::string> resolved_lines() const;
  std::string resolved() const;

 private:
  std::map<std::string, std::string> values_;
};

/// "8,6,6" style list of integers. Throws ConfigError.
std::vector<int> parse_int_list(const std::string& text);

}  // namespace partforge::cli
