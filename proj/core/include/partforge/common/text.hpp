#pragma once

#include <string>

namespace partforge {

/// Round to 9 significant decimal digits; every float written to disk goes
/// through this so that save/load/save is byte-stable.
double round_sig9(double value);

/// "%.9g" formatting.
std::string format_g9(double value);

std::string build_id();

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace partforge
