#include "cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "partforge/common/error.hpp"

namespace partforge::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error(ErrorCode::ConfigError, "bad value '" + text + "' for " + key);
  }
  return value;
}

}  // namespace

RunConfig::RunConfig(const std::vector<KeySpec>& keys) {
  for (const KeySpec& k : keys) values_[k.key] = k.default_value;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
  it->second = value;
}

void RunConfig::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw Error(ErrorCode::ConfigError, "expected key=value, got '" + assignment + "'");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read config file " + path);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    try {
      set_assignment(t);
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigError, path + ":" + std::to_string(number) + ": " + e.what());
    }
  }
}

const std::string& RunConfig::str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
  return it->second;
}

std::int64_t RunConfig::integer(const std::string& key) const {
  return parse_number<std::int64_t>(key, str(key));
}

std::uint64_t RunConfig::seed(const std::string& key) const {
  return parse_number<std::uint64_t>(key, str(key));
}

double RunConfig::real(const std::string& key) const { return parse_number<double>(key, str(key)); }

bool RunConfig::flag(const std::string& key) const {
  const std::string& v = str(key);
  if (v == "1" || v == "true" || v == "on") return true;
  if (v == "0" || v == "false" || v == "off") return false;
  throw Error(ErrorCode::ConfigError, "bad boolean '" + v + "' for " + key);
}

std::vector<int> RunConfig::int_list(const std::string& key) const {
  try {
    return parse_int_list(str(key));
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, key + ": " + e.what());
  }
}

env::ActionCaps RunConfig::caps(const std::string& key) const {
  const std::vector<int> v = int_list(key);
  if (v.size() != 3 || v[0] < 2 || v[1] < 1 || v[2] < 1) {
    throw Error(ErrorCode::ConfigError, key + " must be P,K,W with P >= 2 and K, W >= 1");
  }
  return {v[0], v[1], v[2]};
}

std::vector<std::string> RunConfig::resolved_lines() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) out.push_back(k + "=" + v);
  return out;
}

std::string RunConfig::resolved() const {
  std::string out;
  for (const std::string& line : resolved_lines()) out += line + "\n";
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<int>("list", trim(item)));
  if (out.empty()) throw Error(ErrorCode::ConfigError, "empty list");
  return out;
}

}  // namespace partforge::cli
