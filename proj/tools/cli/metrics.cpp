#include "cli/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "partforge/common/error.hpp"

namespace partforge::cli {

namespace {

constexpr const char* kHeader = "method,diff_level,succ_rate,plan_steps";

std::string one_decimal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw Error(ErrorCode::SchemaVersionMismatch, "bad number '" + s + "' in metrics CSV");
  }
  return v;
}

}  // namespace

double success_percent(int successes, int episodes) {
  if (episodes <= 0) throw Error(ErrorCode::InvalidQuery, "success rate of zero episodes");
  return 100.0 * successes / episodes;
}

std::vector<MetricsRow> sorted_rows(std::vector<MetricsRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const MetricsRow& a, const MetricsRow& b) {
    return std::tie(a.method, a.split) < std::tie(b.method, b.split);
  });
  return rows;
}

std::string metrics_csv(const std::vector<MetricsRow>& rows,
                        const std::vector<std::string>& comments) {
  std::string out;
  for (const std::string& c : comments) out += "# " + c + "\n";
  out += kHeader;
  out += '\n';
  for (const MetricsRow& r : sorted_rows(rows)) {
    out += r.method + "," + r.split + "," + one_decimal(r.success_rate) + ",";
    if (r.plan_steps) out += one_decimal(*r.plan_steps);
    out += '\n';
  }
  return out;
}

std::vector<MetricsRow> parse_metrics_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool header = false;
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != kHeader) throw Error(ErrorCode::SchemaVersionMismatch, "unexpected metrics header");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (line.back() == ',') f.emplace_back();
    if (f.size() != 4) throw Error(ErrorCode::SchemaVersionMismatch, "bad metrics row: " + line);
    MetricsRow r{f[0], f[1], parse_double(f[2]), std::nullopt};
    if (!f[3].empty()) r.plan_steps = parse_double(f[3]);
    rows.push_back(std::move(r));
  }
  if (!header) throw Error(ErrorCode::SchemaVersionMismatch, "metrics CSV without header");
  return rows;
}

std::string metrics_table(const std::vector<MetricsRow>& rows) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-12s %-11s %9s %12s\n", "Method", "Diff-Level", "SuccRate%",
                "Plan Steps");
  std::string out = buf;
  for (const MetricsRow& r : sorted_rows(rows)) {
    const std::string steps = r.plan_steps ? one_decimal(*r.plan_steps) : "-";
    std::snprintf(buf, sizeof buf, "%-12s %-11s %9.1f %12s\n", r.method.c_str(), r.split.c_str(),
                  r.success_rate, steps.c_str());
    out += buf;
  }
  return out;
}

}  // namespace partforge::cli
