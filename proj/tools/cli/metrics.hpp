#pragma once

#include <optional>
#include <string>
#include <vector>

namespace partforge::cli {

/// One line of the results table. success_rate is a percentage.
struct MetricsRow {
  std::string method;  // ours_oc, ours_full or baseline_oc
  std::string split;   // easy_train, hard_train or test
  double success_rate = 0;
  std::optional<double> plan_steps;

  bool operator==(const MetricsRow&) const = default;
};

/// 100 * successes / episodes. Throws InvalidQuery for zero episodes.
double success_percent(int successes, int episodes);

/// Rows sorted by (method, split).
std::vector<MetricsRow> sorted_rows(std::vector<MetricsRow> rows);

/// '#' comment lines, then "method,diff_level,succ_rate,plan_steps" and one
/// row per entry with one decimal place; plan_steps is left empty when
/// absent. Rows are emitted sorted.
std::string metrics_csv(const std::vector<MetricsRow>& rows,
                        const std::vector<std::string>& comments);

/// Inverse of metrics_csv (comments dropped). Throws SchemaVersionMismatch.
std::vector<MetricsRow> parse_metrics_csv(const std::string& text);

/// Fixed-width text table of the rows.
std::string metrics_table(const std::vector<MetricsRow>& rows);

}  // namespace partforge::cli
