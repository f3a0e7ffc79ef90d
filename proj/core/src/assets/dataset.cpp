#include "partforge/assets/dataset.hpp"

#include <cmath>
#include <filesystem>
#include <set>

#include <json.hpp>

#include "partforge/assets/annotate.hpp"
#include "partforge/common/error.hpp"
#include "partforge/common/rng.hpp"
#include "partforge/common/text.hpp"
#include "partforge/geom/obj_io.hpp"

namespace partforge::assets {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("expected 3-vector");
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

std::string part_file(int chair, int part) {
  return "part_" + std::to_string(chair) + "_" + std::to_string(part) + ".obj";
}

std::string chair_file(int chair) { return "chair_" + std::to_string(chair) + ".json"; }

json parse_or_throw(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaVersionMismatch, what + " is not valid JSON: " + e.what());
  }
}

void check_version(const json& j, const std::string& what) {
  if (!j.is_object() || !j.contains("schema_version") ||
      !j["schema_version"].is_number_integer() ||
      j["schema_version"].get<int>() != kSchemaVersion) {
    throw Error(ErrorCode::SchemaVersionMismatch,
                what + " lacks schema_version " + std::to_string(kSchemaVersion));
  }
}

json chair_json(const ChairAsset& c) {
  json parts = json::array();
  for (const Part& p : c.parts) {
    json conns = json::array();
    for (const ConnectionPoint& cp : p.connections) {
      conns.push_back({{"position", vec_json(cp.position)},
                       {"normal", vec_json(cp.normal)},
                       {"tangent", vec_json(cp.tangent)},
                       {"mate_part", cp.mate_part},
                       {"mate_connection", cp.mate_connection}});
    }
    json grasps = json::array();
    for (const GraspRegion& g : p.grasp_regions) {
      json dirs = json::array();
      for (const Vec3& d : g.approach_dirs) dirs.push_back(vec_json(d));
      grasps.push_back({{"center", vec_json(g.center)},
                        {"half_extents", vec_json(g.half_extents)},
                        {"approach_dirs", dirs}});
    }
    parts.push_back({{"id", p.id},
                     {"mesh", part_file(c.id, p.id)},
                     {"equivalence_class", p.equivalence_class},
                     {"connections", conns},
                     {"grasp_regions", grasps}});
  }
  json poses = json::array();
  for (const Pose6D& p : c.gt_poses) poses.push_back({p.tx, p.ty, p.tz, p.rx, p.ry, p.rz});
  json adjacency = json::array();
  for (const MatePair& m : c.gt_adjacency) adjacency.push_back({m.u, m.k, m.v, m.l});
  json designed = json::array();
  for (const auto& [a, b] : c.designed_mates) designed.push_back({a, b});
  json order = json::array();
  for (const AssemblyStep& s : c.assembly_order) order.push_back({s.u, s.v, s.w});
  return {{"schema_version", kSchemaVersion},
          {"id", c.id},
          {"difficulty", to_string(c.difficulty)},
          {"parts", parts},
          {"gt_poses", poses},
          {"adjacency", adjacency},
          {"designed_mates", designed},
          {"assembly_order", order}};
}

ChairAsset chair_from(const json& j, const fs::path& dir) {
  ChairAsset c;
  c.id = j.at("id").get<int>();
  c.difficulty = difficulty_from_string(j.at("difficulty").get<std::string>());
  for (const json& pj : j.at("parts")) {
    Part p;
    p.id = pj.at("id").get<int>();
    p.equivalence_class = pj.at("equivalence_class").get<int>();
    p.mesh = geom::load_obj((dir / pj.at("mesh").get<std::string>()).string());
    p.hull = geom::convex_hull(p.mesh);
    for (const json& cj : pj.at("connections")) {
      ConnectionPoint cp;
      cp.position = vec_from(cj.at("position"));
      cp.normal = vec_from(cj.at("normal"));
      cp.tangent = vec_from(cj.at("tangent"));
      cp.mate_part = cj.at("mate_part").get<int>();
      cp.mate_connection = cj.at("mate_connection").get<int>();
      p.connections.push_back(cp);
    }
    const json& gj = pj.at("grasp_regions");
    if (gj.size() != 2) throw std::invalid_argument("expected two grasp regions");
    for (int g = 0; g < 2; ++g) {
      GraspRegion& r = p.grasp_regions[g];
      r.center = vec_from(gj[g].at("center"));
      r.half_extents = vec_from(gj[g].at("half_extents"));
      const json& dj = gj[g].at("approach_dirs");
      if (dj.size() != 4) throw std::invalid_argument("expected four approach directions");
      for (int d = 0; d < 4; ++d) r.approach_dirs[d] = vec_from(dj[d]);
    }
    c.parts.push_back(std::move(p));
  }
  for (const json& pj : j.at("gt_poses")) {
    if (pj.size() != 6) throw std::invalid_argument("pose needs 6 numbers");
    c.gt_poses.push_back({pj[0].get<double>(), pj[1].get<double>(), pj[2].get<double>(),
                          pj[3].get<double>(), pj[4].get<double>(), pj[5].get<double>()});
  }
  for (const json& a : j.at("adjacency")) {
    c.gt_adjacency.push_back({a.at(0).get<int>(), a.at(1).get<int>(), a.at(2).get<int>(),
                              a.at(3).get<int>()});
  }
  for (const json& a : j.at("designed_mates")) {
    c.designed_mates.push_back({a.at(0).get<int>(), a.at(1).get<int>()});
  }
  for (const json& a : j.at("assembly_order")) {
    c.assembly_order.push_back({a.at(0).get<int>(), a.at(1).get<int>(), a.at(2).get<int>()});
  }
  if (c.gt_poses.size() != c.parts.size()) throw std::invalid_argument("pose count mismatch");
  return c;
}

}  // namespace

const ChairAsset& Dataset::chair(int id) const {
  for (const ChairAsset& c : chairs) {
    if (c.id == id) return c;
  }
  throw Error(ErrorCode::IoError, "chair " + std::to_string(id) + " not in dataset");
}

Dataset make_dataset(const DatasetSpec& spec) {
  if (spec.n_chairs < 2) throw Error(ErrorCode::ConfigError, "dataset needs at least 2 chairs");
  Dataset data;
  DatasetManifest& m = data.manifest;
  m.seed = spec.seed;
  m.max_parts = spec.generator.max_parts;
  m.max_connections = spec.generator.max_connections;
  const int n = spec.n_chairs;
  m.n_test = std::clamp(static_cast<int>(std::lround(n * spec.test_fraction)), 1, n - 1);
  m.n_train = n - m.n_test;
  const int hard_train = static_cast<int>(std::lround(m.n_train * spec.hard_fraction));
  const int easy_train = m.n_train - hard_train;
  const int hard_test = static_cast<int>(std::lround(m.n_test * spec.hard_fraction));

  for (int id = 0; id < n; ++id) {
    Difficulty diff;
    if (id < easy_train) {
      diff = Difficulty::Easy;
      m.easy_train.push_back(id);
    } else if (id < m.n_train) {
      diff = Difficulty::Hard;
      m.hard_train.push_back(id);
    } else {
      diff = (id - m.n_train) < hard_test ? Difficulty::Hard : Difficulty::Easy;
      m.test.push_back(id);
    }
    ChairAsset chair = generate_chair(mix_seed(spec.seed, static_cast<std::uint64_t>(id)), diff,
                                      spec.generator);
    chair.id = id;
    annotate_chair(chair, spec.generator.max_connections);
    data.chairs.push_back(std::move(chair));
  }
  return data;
}

std::string chair_to_json(const ChairAsset& chair) { return chair_json(chair).dump(1) + "\n"; }

std::string manifest_to_json(const DatasetManifest& m) {
  const json j = {{"schema_version", kSchemaVersion},
                  {"easy_train", m.easy_train},
                  {"hard_train", m.hard_train},
                  {"test", m.test},
                  {"n_train", m.n_train},
                  {"n_test", m.n_test},
                  {"seed", m.seed},
                  {"max_parts", m.max_parts},
                  {"max_connections", m.max_connections}};
  return j.dump(1) + "\n";
}

void save_dataset(const Dataset& data, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir + ": " + ec.message());
  const fs::path root(dir);
  write_text_file((root / "manifest.json").string(), manifest_to_json(data.manifest));
  for (const ChairAsset& c : data.chairs) {
    write_text_file((root / chair_file(c.id)).string(), chair_to_json(c));
    for (const Part& p : c.parts) {
      geom::save_obj((root / part_file(c.id, p.id)).string(), p.mesh);
    }
  }
}

Dataset load_dataset(const std::string& dir) {
  const fs::path root(dir);
  const json mj = parse_or_throw(read_text_file((root / "manifest.json").string()), "manifest");
  check_version(mj, "manifest");
  Dataset data;
  DatasetManifest& m = data.manifest;
  try {
    m.easy_train = mj.at("easy_train").get<std::vector<int>>();
    m.hard_train = mj.at("hard_train").get<std::vector<int>>();
    m.test = mj.at("test").get<std::vector<int>>();
    m.n_train = mj.at("n_train").get<int>();
    m.n_test = mj.at("n_test").get<int>();
    m.seed = mj.at("seed").get<std::uint64_t>();
    m.max_parts = mj.at("max_parts").get<int>();
    m.max_connections = mj.at("max_connections").get<int>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaVersionMismatch, std::string("manifest: ") + e.what());
  }
  std::set<int> ids;
  for (const auto* split : {&m.easy_train, &m.hard_train, &m.test}) {
    for (int id : *split) {
      if (!ids.insert(id).second) {
        throw Error(ErrorCode::SchemaVersionMismatch, "chair listed twice in manifest");
      }
    }
  }
  for (int id : ids) {
    const std::string path = (root / chair_file(id)).string();
    const json cj = parse_or_throw(read_text_file(path), chair_file(id));
    check_version(cj, chair_file(id));
    try {
      data.chairs.push_back(chair_from(cj, root));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::SchemaVersionMismatch, chair_file(id) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw Error(ErrorCode::SchemaVersionMismatch, chair_file(id) + ": " + e.what());
    }
  }
  return data;
}

}  // namespace partforge::assets
