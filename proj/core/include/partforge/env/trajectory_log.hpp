#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "partforge/env/step.hpp"

namespace partforge::env {

/// One JSON-lines record. `action` is empty for the reset record at t = 0,
/// five ints in the object-centric setting and six in the full setting.
struct TrajectoryRecord {
  int episode = 0;
  int t = 0;
  std::vector<int> action;
  double reward = 0;
  bool done = false;
  Failure failure = Failure::None;
  std::vector<Pose6D> poses;
};

TrajectoryRecord reset_record(int episode, const AssemblyState& s);
TrajectoryRecord step_record(int episode, const ActionOC& a, const StepResult& r);
TrajectoryRecord step_record(int episode, const ActionFull& a, const StepResult& r);
/// Record of a padded action index decoded for `setting`.
TrajectoryRecord step_record(int episode, const ActionCaps& caps, std::int64_t action,
                             Setting setting, const StepResult& r);

/// Single line, no trailing newline, keys sorted, floats to 9 significant digits.
std::string to_json_line(const TrajectoryRecord& r);
TrajectoryRecord from_json_line(const std::string& line);

class TrajectoryWriter {
 public:
  explicit TrajectoryWriter(std::ostream& out) : out_(&out) {}
  void write(const TrajectoryRecord& r);

 private:
  std::ostream* out_;
};

std::vector<TrajectoryRecord> read_trajectories(const std::string& path);

}  // namespace partforge::env
