#include "partforge/planner/report.hpp"

#include <cstdio>

namespace partforge::planner {

std::string planner_report_csv(const std::vector<PlannerReportRow>& rows) {
  std::string out = "chair_id,query_kind,result,states_attempted,wall_ms\n";
  char buf[64];
  for (const PlannerReportRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.3f", r.wall_ms);
    out += std::to_string(r.chair_id) + "," + r.query_kind + "," + (r.found ? "path" : "no_path") +
           "," + std::to_string(r.states_attempted) + "," + buf + "\n";
  }
  return out;
}

}  // namespace partforge::planner
