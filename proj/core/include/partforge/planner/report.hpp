#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace partforge::planner {

struct PlannerReportRow {
  int chair_id = 0;
  std::string query_kind;  // "mating" or "full"
  bool found = false;
  std::int64_t states_attempted = 0;
  double wall_ms = 0;
};

/// CSV with header chair_id,query_kind,result,states_attempted,wall_ms.
std::string planner_report_csv(const std::vector<PlannerReportRow>& rows);

}  // namespace partforge::planner
