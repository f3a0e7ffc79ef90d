#include "partforge/env/trajectory_log.hpp"

#include <fstream>
#include <ostream>

#include <json.hpp>

#include "partforge/common/error.hpp"
#include "partforge/common/text.hpp"

namespace partforge::env {

using nlohmann::json;

namespace {

Failure failure_from_string(const std::string& s) {
  for (Failure f : {Failure::None, Failure::InvalidSelection, Failure::NoMatingPath,
                    Failure::GraspInfeasible}) {
    if (to_string(f) == s) return f;
  }
  throw Error(ErrorCode::SchemaVersionMismatch, "unknown failure tag '" + s + "'");
}

TrajectoryRecord base_record(int episode, const StepResult& r) {
  TrajectoryRecord rec;
  rec.episode = episode;
  rec.t = r.next_state.step_count;
  rec.reward = r.reward;
  rec.done = r.done;
  rec.failure = r.failure;
  rec.poses = r.next_state.poses;
  return rec;
}

}  // namespace

TrajectoryRecord reset_record(int episode, const AssemblyState& s) {
  TrajectoryRecord rec;
  rec.episode = episode;
  rec.t = s.step_count;
  rec.poses = s.poses;
  return rec;
}

TrajectoryRecord step_record(int episode, const ActionOC& a, const StepResult& r) {
  TrajectoryRecord rec = base_record(episode, r);
  rec.action = {a.u, a.v, a.k, a.l, a.w};
  return rec;
}

TrajectoryRecord step_record(int episode, const ActionFull& a, const StepResult& r) {
  TrajectoryRecord rec = base_record(episode, r);
  rec.action = {a.u, a.v, a.k, a.l, a.g_a, a.g_b};
  return rec;
}

TrajectoryRecord step_record(int episode, const ActionCaps& caps, std::int64_t action,
                             Setting setting, const StepResult& r) {
  if (setting == Setting::Full) return step_record(episode, decode_full(caps, action), r);
  return step_record(episode, decode_oc(caps, action), r);
}

std::string to_json_line(const TrajectoryRecord& r) {
  json poses = json::array();
  for (const Pose6D& p : r.poses) {
    poses.push_back({round_sig9(p.tx), round_sig9(p.ty), round_sig9(p.tz), round_sig9(p.rx),
                     round_sig9(p.ry), round_sig9(p.rz)});
  }
  json j = {{"episode", r.episode}, {"t", r.t},           {"action", r.action},
            {"reward", r.reward},   {"done", r.done},     {"failure", to_string(r.failure)},
            {"poses", poses}};
  return j.dump();
}

TrajectoryRecord from_json_line(const std::string& line) {
  try {
    const json j = json::parse(line);
    TrajectoryRecord r;
    r.episode = j.at("episode").get<int>();
    r.t = j.at("t").get<int>();
    r.action = j.at("action").get<std::vector<int>>();
    r.reward = j.at("reward").get<double>();
    r.done = j.at("done").get<bool>();
    r.failure = failure_from_string(j.at("failure").get<std::string>());
    for (const json& p : j.at("poses")) {
      const auto v = p.get<std::vector<double>>();
      if (v.size() != 6) throw Error(ErrorCode::SchemaVersionMismatch, "pose needs 6 values");
      r.poses.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaVersionMismatch, std::string("bad trajectory record: ") + e.what());
  }
}

void TrajectoryWriter::write(const TrajectoryRecord& r) { *out_ << to_json_line(r) << '\n'; }

std::vector<TrajectoryRecord> read_trajectories(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::vector<TrajectoryRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(from_json_line(line));
  }
  return out;
}

}  // namespace partforge::env
