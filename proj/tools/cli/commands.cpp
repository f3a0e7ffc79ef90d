#include "cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>
#include <chrono>

#include "cli/metrics.hpp"
#include "cli/pool.hpp"
#include "partforge/assets/annotate.hpp"
#include "partforge/assets/dataset.hpp"
#include "partforge/common/rng.hpp"
#include "partforge/common/text.hpp"
#include "partforge/geom/mesh.hpp"
#include "partforge/geom/obj_io.hpp"
#include "partforge/learn/checkpoint.hpp"
#include "partforge/learn/ddqn.hpp"
#include "partforge/learn/distill.hpp"
#include "partforge/planner/full_assembly.hpp"
#include "partforge/planner/report.hpp"

namespace partforge::cli {

namespace fs = std::filesystem;
using ChairPtr = std::shared_ptr<const assets::ChairAsset>;

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

const std::string& required(const RunConfig& c, const std::string& key) {
  const std::string& v = c.str(key);
  if (v.empty()) throw Error(ErrorCode::ConfigError, key + " is required");
  return v;
}

void make_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir + ": " + ec.message());
}

/// Creates the output directory and records the resolved config in it.
std::string prepare_out_dir(const RunConfig& c) {
  const std::string& out = required(c, "out");
  make_dir(out);
  write_text_file(join_path(out, "config.txt"), "# build " + build_id() + "\n" + c.resolved());
  return out;
}

void log_config(const std::string& command, const RunConfig& c) {
  log_line(command + " (build " + build_id() + ")");
  for (const std::string& line : c.resolved_lines()) log_line("  " + line);
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string split_name(const assets::DatasetManifest& m, int id) {
  auto has = [id](const std::vector<int>& v) { return std::find(v.begin(), v.end(), id) != v.end(); };
  if (has(m.easy_train)) return "easy_train";
  if (has(m.hard_train)) return "hard_train";
  if (has(m.test)) return "test";
  throw Error(ErrorCode::ConfigError, "chair " + std::to_string(id) + " is in no split");
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

bool is_train_split(const std::string& split) { return split != "test"; }

std::vector<int> split_ids(const assets::DatasetManifest& m, const std::string& split) {
  std::vector<int> out;
  auto add = [&out](const std::vector<int>& v) { out.insert(out.end(), v.begin(), v.end()); };
  if (split == "easy_train" || split == "train" || split == "all") add(m.easy_train);
  if (split == "hard_train" || split == "train" || split == "all") add(m.hard_train);
  if (split == "test" || split == "all") add(m.test);
  if (out.empty() && split != "easy_train" && split != "hard_train" && split != "test") {
    throw Error(ErrorCode::ConfigError,
                "unknown split '" + split + "' (easy_train, hard_train, train, test, all)");
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Chair ids from the "chairs" key when set, else from the "split" key.
std::vector<int> selected_ids(const RunConfig& c, const assets::DatasetManifest& m) {
  if (c.knows("chairs") && !c.str("chairs").empty()) {
    std::vector<int> ids = c.int_list("chairs");
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
  }
  return split_ids(m, c.str("split"));
}

assets::Dataset load_data(const RunConfig& c) { return assets::load_dataset(required(c, "dataset")); }

ChairPtr chair_ptr(const assets::Dataset& d, int id) {
  return std::make_shared<const assets::ChairAsset>(d.chair(id));
}

std::string ae_path(const RunConfig& c) {
  const std::string& p = c.str("ae");
  return p.empty() ? join_path(required(c, "dataset"), "ae.ckpt") : p;
}

env::StepParams step_params(const RunConfig& c, env::Setting setting) {
  env::StepParams p;
  p.setting = setting;
  p.planner.max_states = c.integer("max_states");
  if (p.planner.max_states < 1) throw Error(ErrorCode::ConfigError, "max_states must be positive");
  p.planner.seed = c.seed("seed");
  return p;
}

env::Setting setting_of(const learn::CheckpointMeta& meta) {
  auto it = meta.find("setting");
  return env::parse_setting(it == meta.end() ? "oc" : it->second);
}

std::string method_name(env::Setting s) { return "ours_" + env::to_string(s); }

void write_metrics(const std::string& dir, const std::vector<MetricsRow>& rows,
                   const RunConfig& c) {
  write_text_file(join_path(dir, "metrics.csv"), metrics_csv(rows, artifact_header(c)));
}

// Success counts grouped by split, in split order.
struct SplitTally {
  int successes = 0;
  int episodes = 0;
  double states = 0;
};

std::vector<MetricsRow> tally_rows(const std::string& method,
                                   const std::map<std::string, SplitTally>& tallies,
                                   bool steps_on_train) {
  std::vector<MetricsRow> rows;
  for (const auto& [split, t] : tallies) {
    MetricsRow r{method, split, success_percent(t.successes, t.episodes), std::nullopt};
    if (steps_on_train || !is_train_split(split)) r.plan_steps = t.states / t.episodes;
    rows.push_back(r);
  }
  return rows;
}

// ---------------------------------------------------------------- commands

void cmd_gen_dataset(const RunConfig& c) {
  log_config("gen-dataset", c);
  assets::DatasetSpec spec;
  spec.n_chairs = static_cast<int>(c.integer("n_chairs"));
  spec.test_fraction = c.real("test_fraction");
  spec.hard_fraction = c.real("hard_fraction");
  spec.seed = c.seed("seed");
  spec.generator.max_parts = static_cast<int>(c.integer("max_parts"));
  spec.generator.max_connections = static_cast<int>(c.integer("max_connections"));
  const assets::Dataset data = assets::make_dataset(spec);
  assets::save_dataset(data, required(c, "out"));
  log_line("wrote " + std::to_string(data.chairs.size()) + " chairs (" +
           std::to_string(data.manifest.easy_train.size()) + " easy, " +
           std::to_string(data.manifest.hard_train.size()) + " hard, " +
           std::to_string(data.manifest.test.size()) + " test) to " + c.str("out"));
}

void cmd_annotate(const RunConfig& c) {
  log_config("annotate", c);
  assets::Dataset data = load_data(c);
  const int max_conn = static_cast<int>(c.integer("max_connections"));
  for (assets::ChairAsset& chair : data.chairs) assets::annotate_chair(chair, max_conn);
  const std::string out = c.str("out").empty() ? c.str("dataset") : c.str("out");
  assets::save_dataset(data, out);
  log_line("annotated " + std::to_string(data.chairs.size()) + " chairs into " + out);
}

void cmd_train_ae(const RunConfig& c) {
  log_config("train-ae", c);
  const assets::Dataset data = load_data(c);
  std::vector<assets::ChairAsset> chairs;
  for (int id : split_ids(data.manifest, c.str("split"))) chairs.push_back(data.chair(id));
  learn::AeTrainConfig cfg;
  cfg.epochs = static_cast<int>(c.integer("epochs"));
  cfg.batch = static_cast<int>(c.integer("batch"));
  cfg.lr = c.real("lr");
  cfg.seed = c.seed("seed");
  cfg.shape.points = static_cast<int>(c.integer("points"));
  const auto clouds = learn::training_clouds(chairs, cfg.shape.points, cfg.seed);
  log_line("training on " + std::to_string(clouds.size()) + " part clouds");
  const learn::AeTrainResult r = learn::ae_train(clouds, cfg);
  const std::string out =
      c.str("out").empty() ? join_path(required(c, "dataset"), "ae.ckpt") : c.str("out");
  if (fs::path(out).has_parent_path()) make_dir(fs::path(out).parent_path().string());
  learn::save_autoencoder(out, r.model,
                          {{"build", build_id()}, {"config", c.resolved()},
                           {"initial_loss", format_g9(r.initial_loss)},
                           {"final_loss", format_g9(r.final_loss)}});
  std::string log = "epoch,loss\n";
  for (std::size_t e = 0; e < r.epoch_losses.size(); ++e) {
    log += std::to_string(e + 1) + "," + format_g9(r.epoch_losses[e]) + "\n";
  }
  write_text_file(out + ".csv", log);
  log_line("loss " + format_g9(r.initial_loss) + " -> " + format_g9(r.final_loss) +
           ", final/initial " + fmt("%.4f", r.final_loss / r.initial_loss));
}

struct ExpertSummary {
  int chair_id = 0;
  std::string split;
  int successes = 0;
  int episodes = 0;
  std::int64_t best_step = 0;
  std::int64_t steps = 0;
};

void cmd_train_single(const RunConfig& c) {
  log_config("train-single", c);
  const std::string out = prepare_out_dir(c);
  const assets::Dataset data = load_data(c);
  const learn::Autoencoder ae = learn::load_autoencoder(ae_path(c)).ae;
  const env::ActionCaps caps = c.caps("caps");
  const env::Setting setting = env::parse_setting(c.str("setting"));
  if (caps.orientations != env::trailing_count(setting)) {
    throw Error(ErrorCode::ConfigError, "caps W must be " +
                                            std::to_string(env::trailing_count(setting)) +
                                            " in the " + env::to_string(setting) + " setting");
  }
  learn::DdqnConfig base;
  base.budget = c.integer("budget");
  base.gamma = c.real("gamma");
  base.lr = c.real("lr");
  base.batch = static_cast<int>(c.integer("batch"));
  base.replay = static_cast<std::size_t>(c.integer("replay"));
  base.target_sync = static_cast<int>(c.integer("target_sync"));
  base.train_freq = static_cast<int>(c.integer("train_freq"));
  base.learning_starts = c.integer("learning_starts");
  base.eps_start = c.real("eps_start");
  base.eps_end = c.real("eps_end");
  base.eps_fraction = c.real("eps_fraction");
  base.eval_every = c.integer("eval_every");
  base.eval_episodes = static_cast<int>(c.integer("eval_episodes"));
  base.stop_success = c.real("stop_success");
  base.hidden = c.int_list("hidden");
  base.step = step_params(c, setting);

  const std::vector<int> ids = selected_ids(c, data.manifest);
  for (int id : ids) env::check_caps(data.chair(id), caps);
  const auto results = parallel_map<ExpertSummary>(ids.size(), worker_count(), [&](std::size_t i) {
    const int id = ids[i];
    learn::DdqnConfig cfg = base;
    cfg.seed = mix_seed(c.seed("seed"), static_cast<std::uint64_t>(id));
    cfg.step.planner.seed = mix_seed(base.step.planner.seed, static_cast<std::uint64_t>(id));
    const learn::TrainResult r = learn::train_single(chair_ptr(data, id), ae, caps, cfg);
    const std::string tag = std::to_string(id);
    learn::save_qnet(join_path(out, "expert_" + tag + ".ckpt"), r.best, caps,
                     {{"build", build_id()},
                      {"chair_id", tag},
                      {"setting", env::to_string(setting)},
                      {"best_success", format_g9(r.best_success)},
                      {"best_step", std::to_string(r.best_step)},
                      {"config", c.resolved()}});
    write_text_file(join_path(out, "curve_" + tag + ".csv"), learn::curve_csv(r.curve));
    const int successes = static_cast<int>(std::lround(r.best_success * cfg.eval_episodes));
    log_line("chair " + tag + ": greedy success " + fmt("%.2f", r.best_success) + " at step " +
             std::to_string(r.best_step));
    return ExpertSummary{id, split_name(data.manifest, id), successes, cfg.eval_episodes,
                         r.best_step, r.steps};
  });

  std::string table = "chair_id,split,successes,episodes,best_step,steps\n";
  std::map<std::string, SplitTally> tallies;
  for (const ExpertSummary& s : results) {
    table += std::to_string(s.chair_id) + "," + s.split + "," + std::to_string(s.successes) + "," +
             std::to_string(s.episodes) + "," + std::to_string(s.best_step) + "," +
             std::to_string(s.steps) + "\n";
    SplitTally& t = tallies[s.split];
    t.successes += s.successes;
    t.episodes += s.episodes;
  }
  write_text_file(join_path(out, "experts.csv"), table);
  write_metrics(out, tally_rows(method_name(setting), tallies, false), c);
}

void cmd_distill(const RunConfig& c) {
  log_config("distill", c);
  const std::string out = prepare_out_dir(c);
  const assets::Dataset data = load_data(c);
  const learn::Autoencoder ae = learn::load_autoencoder(ae_path(c)).ae;
  const std::string experts_dir = required(c, "experts");
  const std::string table = read_text_file(join_path(experts_dir, "experts.csv"));

  std::vector<learn::Expert> experts;
  std::optional<env::ActionCaps> caps;
  env::Setting setting = env::Setting::ObjectCentric;
  std::istringstream in(table);
  std::string line;
  std::getline(in, line);
  const double min_success = c.real("min_success");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_fields(line);
    if (f.size() != 6) throw Error(ErrorCode::SchemaVersionMismatch, "bad experts.csv row: " + line);
    const int id = std::stoi(f[0]), successes = std::stoi(f[2]), episodes = std::stoi(f[3]);
    if (episodes <= 0 || static_cast<double>(successes) / episodes <= min_success) continue;
    learn::LoadedQNet q =
        learn::load_qnet(join_path(experts_dir, "expert_" + std::to_string(id) + ".ckpt"));
    if (caps && !(*caps == q.caps)) throw Error(ErrorCode::CapMismatch, "experts use different caps");
    caps = q.caps;
    setting = setting_of(q.meta);
    experts.push_back({chair_ptr(data, id), std::make_shared<const learn::QNet>(std::move(q.net))});
  }
  if (experts.empty()) throw Error(ErrorCode::ConfigError, "no successful experts in " + experts_dir);
  log_line("distilling " + std::to_string(experts.size()) + " experts");

  learn::ExpertDataConfig dcfg;
  dcfg.episodes = static_cast<int>(c.integer("episodes"));
  dcfg.augment_copies = static_cast<int>(c.integer("augment"));
  dcfg.noise_sigma = c.real("noise");
  dcfg.seed = c.seed("seed");
  dcfg.step = step_params(c, setting);
  const std::vector<learn::ExpertRecord> records =
      learn::collect_expert_records(experts, ae, *caps, dcfg);
  const int holdout = static_cast<int>(c.integer("holdout"));
  std::vector<learn::ExpertRecord> held_in, held_out;
  for (const learn::ExpertRecord& r : records) {
    (r.rollout >= dcfg.episodes - holdout ? held_out : held_in).push_back(r);
  }
  if (held_in.empty()) throw Error(ErrorCode::ConfigError, "no expert states left for training");

  learn::DistillConfig cfg;
  cfg.epochs = static_cast<int>(c.integer("epochs"));
  cfg.batch = static_cast<int>(c.integer("batch"));
  cfg.lr = c.real("lr");
  cfg.lambda = c.real("lambda");
  cfg.hidden = c.int_list("hidden");
  cfg.seed = c.seed("seed");
  const learn::DistillResult r = learn::distill_train(held_in, cfg);

  std::vector<learn::ExpertRecord> clean_in;
  for (const auto& rec : held_in) {
    if (!rec.augmented) clean_in.push_back(rec);
  }
  const double agree_in = learn::argmax_agreement(r.net, clean_in);
  const double agree_out = held_out.empty() ? NAN : learn::argmax_agreement(r.net, held_out);
  learn::save_qnet(join_path(out, "policy.ckpt"), r.net, *caps,
                   {{"build", build_id()},
                    {"setting", env::to_string(setting)},
                    {"experts", std::to_string(experts.size())},
                    {"agreement_held_in", format_g9(agree_in)},
                    {"config", c.resolved()}});
  std::string log = "epoch,loss\n";
  for (std::size_t e = 0; e < r.epoch_loss.size(); ++e) {
    log += std::to_string(e + 1) + "," + format_g9(r.epoch_loss[e]) + "\n";
  }
  write_text_file(join_path(out, "distill_log.csv"), log);
  const std::string summary =
      "experts " + std::to_string(experts.size()) + "\nrecords " + std::to_string(held_in.size()) +
      "\nheld_out_records " + std::to_string(held_out.size()) + "\nagreement_held_in " +
      fmt("%.4f", agree_in) + "\nagreement_held_out " +
      (held_out.empty() ? std::string("-") : fmt("%.4f", agree_out)) + "\n";
  write_text_file(join_path(out, "distill.txt"), summary);
  log_line("held-in agreement " + fmt("%.4f", agree_in) +
           (held_out.empty() ? "" : ", held-out " + fmt("%.4f", agree_out)));
}

struct ChairEval {
  std::string split;
  int successes = 0;
  int episodes = 0;
  double states = 0;
  std::string rows;
};

void cmd_eval(const RunConfig& c) {
  log_config("eval", c);
  const std::string out = prepare_out_dir(c);
  const assets::Dataset data = load_data(c);
  const learn::Autoencoder ae = learn::load_autoencoder(ae_path(c)).ae;
  const learn::LoadedQNet policy = learn::load_qnet(required(c, "policy"));
  if (!c.str("caps").empty() && !(c.caps("caps") == policy.caps)) {
    throw Error(ErrorCode::CapMismatch, "--caps differs from the checkpoint's caps");
  }
  const env::Setting setting = setting_of(policy.meta);
  const env::StepParams params = step_params(c, setting);
  const int episodes = static_cast<int>(c.integer("episodes"));
  if (episodes < 1) throw Error(ErrorCode::ConfigError, "episodes must be positive");
  const std::vector<int> ids = selected_ids(c, data.manifest);
  for (int id : ids) {
    try {
      env::check_caps(data.chair(id), policy.caps);
    } catch (const Error& e) {
      throw Error(ErrorCode::CapMismatch, "chair " + std::to_string(id) + ": " + e.what());
    }
  }

  const auto evals = parallel_map<ChairEval>(ids.size(), worker_count(), [&](std::size_t i) {
    const int id = ids[i];
    std::ofstream traj(join_path(out, "traj_chair" + std::to_string(id) + ".jsonl"));
    if (!traj) throw Error(ErrorCode::IoError, "cannot write trajectories in " + out);
    env::TrajectoryWriter writer(traj);
    ChairEval ev{split_name(data.manifest, id), 0, 0, 0, ""};
    const ChairPtr chair = chair_ptr(data, id);
    for (int e = 0; e < episodes; ++e) {
      const learn::EpisodeResult r =
          learn::run_greedy_episode(policy.net, ae, chair, policy.caps, c.seed("seed"), e, params,
                                    &writer);
      ev.successes += r.success;
      ++ev.episodes;
      ev.states += static_cast<double>(r.plan_states);
      ev.rows += std::to_string(id) + "," + std::to_string(e) + "," + (r.success ? "1" : "0") +
                 "," + std::to_string(r.steps) + "," + format_g9(r.total_reward) + "," +
                 std::to_string(r.plan_states) + "," + env::to_string(r.last_failure) + "\n";
    }
    return ev;
  });

  std::string table = "chair_id,episode,success,steps,reward,plan_states,last_failure\n";
  std::map<std::string, SplitTally> tallies;
  for (const ChairEval& ev : evals) {
    table += ev.rows;
    SplitTally& t = tallies[ev.split];
    t.successes += ev.successes;
    t.episodes += ev.episodes;
    t.states += ev.states;
  }
  write_text_file(join_path(out, "episodes.csv"), table);
  const auto rows = tally_rows(method_name(setting), tallies, false);
  write_metrics(out, rows, c);
  std::cout << metrics_table(rows);
}

struct ChairBaseline {
  std::string split;
  std::vector<planner::PlannerReportRow> report;
};

void cmd_baseline(const RunConfig& c) {
  log_config("baseline", c);
  const std::string out = prepare_out_dir(c);
  const assets::Dataset data = load_data(c);
  const env::StepParams params = step_params(c, env::Setting::ObjectCentric);
  const int episodes = static_cast<int>(c.integer("episodes"));
  if (episodes < 1) throw Error(ErrorCode::ConfigError, "episodes must be positive");
  const std::vector<int> ids = selected_ids(c, data.manifest);

  const auto runs = parallel_map<ChairBaseline>(ids.size(), worker_count(), [&](std::size_t i) {
    const int id = ids[i];
    const ChairPtr chair = chair_ptr(data, id);
    ChairBaseline cb{split_name(data.manifest, id), {}};
    for (int e = 0; e < episodes; ++e) {
      // Same initial layouts as eval episodes with the same seed.
      const std::uint64_t eseed = learn::episode_seed(c.seed("seed"), e);
      const env::AssemblyState s = env::reset(chair, eseed);
      planner::RrtParams rp = params.planner;
      rp.seed = mix_seed(params.planner.seed, eseed);
      const auto t0 = std::chrono::steady_clock::now();
      const planner::PlanOutcome r = planner::plan_full_assembly(*chair, s.poses, rp);
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      cb.report.push_back({id, "full", r.found, r.states_attempted, ms});
    }
    return cb;
  });

  std::vector<planner::PlannerReportRow> report;
  std::map<std::string, SplitTally> tallies;
  for (const ChairBaseline& cb : runs) {
    SplitTally& t = tallies[cb.split];
    for (const auto& row : cb.report) {
      t.successes += row.found;
      ++t.episodes;
      t.states += static_cast<double>(row.states_attempted);
      report.push_back(row);
    }
  }
  write_text_file(join_path(out, "planner_report.csv"), planner::planner_report_csv(report));
  const auto rows = tally_rows("baseline_oc", tallies, true);
  write_metrics(out, rows, c);
  std::cout << metrics_table(rows);
}

void cmd_export_traj(const RunConfig& c) {
  log_config("export-traj", c);
  const std::string& log = required(c, "log");
  const std::string& out = required(c, "out");
  const assets::Dataset data = load_data(c);
  int chair_id = -1;
  if (!c.str("chair").empty()) {
    chair_id = static_cast<int>(c.integer("chair"));
  } else {
    std::smatch m;
    const std::string name = fs::path(log).filename().string();
    if (!std::regex_search(name, m, std::regex("chair(\\d+)"))) {
      throw Error(ErrorCode::ConfigError, "chair is required when the log name has no chair id");
    }
    chair_id = std::stoi(m[1]);
  }
  const assets::ChairAsset& chair = data.chair(chair_id);
  const int episode = static_cast<int>(c.integer("episode"));
  make_dir(out);
  int written = 0;
  for (const env::TrajectoryRecord& r : env::read_trajectories(log)) {
    if (episode >= 0 && r.episode != episode) continue;
    if (static_cast<int>(r.poses.size()) != chair.part_count()) {
      throw Error(ErrorCode::SchemaVersionMismatch, "log poses do not match chair " +
                                                        std::to_string(chair_id));
    }
    geom::TriMesh scene;
    for (int x = 0; x < chair.part_count(); ++x) {
      scene = geom::merged(scene, geom::transformed(chair.parts[x].mesh, r.poses[x]));
    }
    geom::save_obj(join_path(out, "e" + std::to_string(r.episode) + "_t" + std::to_string(r.t) +
                                      ".obj"),
                   scene);
    ++written;
  }
  log_line("wrote " + std::to_string(written) + " scenes to " + out);
}

void cmd_report(const RunConfig& c) {
  log_config("report", c);
  const std::vector<std::string> runs = [&] {
    std::vector<std::string> v;
    std::stringstream ss(required(c, "runs"));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) v.push_back(item);
    }
    return v;
  }();
  std::vector<MetricsRow> rows;
  for (const std::string& dir : runs) {
    const auto part = parse_metrics_csv(read_text_file(join_path(dir, "metrics.csv")));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  std::vector<std::string> header = artifact_header(c);
  const std::string csv = metrics_csv(rows, header);
  const std::string table = metrics_table(rows);
  if (c.str("out").empty()) {
    std::cout << csv;
  } else {
    make_dir(c.str("out"));
    write_text_file(join_path(c.str("out"), "metrics.csv"), csv);
    write_text_file(join_path(c.str("out"), "summary.txt"), table);
  }
  std::cerr << table;
}

// ------------------------------------------------------------------- keys

std::vector<KeySpec> with(std::vector<KeySpec> keys, std::initializer_list<KeySpec> more) {
  keys.insert(keys.end(), more);
  return keys;
}

const std::vector<KeySpec> kPlanKeys = {
    {"dataset", "", "dataset directory"},
    {"seed", "0", "run seed"},
    {"out", "", "output directory"},
};

std::vector<Command> build_commands() {
  std::vector<Command> out;
  out.push_back({"gen-dataset", "generate and annotate a chair dataset",
                 {{"out", "", "output directory"},
                  {"seed", "0", "dataset seed"},
                  {"n_chairs", "40", "number of chairs"},
                  {"test_fraction", "0.2", "fraction of chairs held out for testing"},
                  {"hard_fraction", "0.25", "fraction of training chairs with backs and stretchers"},
                  {"max_parts", "8", "largest chair to generate"},
                  {"max_connections", "6", "largest connection count per part"}},
                 "",
                 cmd_gen_dataset});
  out.push_back({"annotate", "recompute connections, classes and grasp regions",
                 {{"dataset", "", "dataset directory"},
                  {"out", "", "output directory (default: in place)"},
                  {"max_connections", "6", "largest connection count per part"}},
                 "",
                 cmd_annotate});
  out.push_back({"train-ae", "train the point-cloud autoencoder",
                 {{"dataset", "", "dataset directory"},
                  {"out", "", "checkpoint path (default: <dataset>/ae.ckpt)"},
                  {"seed", "0", "training seed"},
                  {"split", "train", "chairs whose parts are sampled"},
                  {"epochs", "100", "epochs"},
                  {"batch", "32", "batch size"},
                  {"lr", "0.001", "Adam learning rate"},
                  {"points", "256", "points per cloud"}},
                 "",
                 cmd_train_ae});
  out.push_back({"train-single", "train one Double-DQN expert per chair",
                 with(kPlanKeys, {{"ae", "", "autoencoder checkpoint (default: <dataset>/ae.ckpt)"},
                                  {"split", "train", "chairs to train on"},
                                  {"chairs", "", "comma-separated chair ids (overrides split)"},
                                  {"setting", "oc", "oc or full"},
                                  {"caps", "8,6,6", "P,K,W action caps (W = 64 for full)"},
                                  {"budget", "40000", "environment steps per chair"},
                                  {"max_states", "10000", "planner cap per mating query"},
                                  {"gamma", "0.95", "discount"},
                                  {"lr", "0.0001", "Adam learning rate"},
                                  {"batch", "64", "batch size"},
                                  {"replay", "50000", "replay capacity"},
                                  {"target_sync", "1000", "updates between target syncs"},
                                  {"train_freq", "4", "environment steps per update"},
                                  {"learning_starts", "1000", "steps before the first update"},
                                  {"eps_start", "1.0", "initial exploration rate"},
                                  {"eps_end", "0.05", "final exploration rate"},
                                  {"eps_fraction", "0.5", "fraction of the budget spent annealing"},
                                  {"eval_every", "2000", "steps between greedy evaluations"},
                                  {"eval_episodes", "20", "episodes per evaluation"},
                                  {"stop_success", "1.0", "stop at this greedy success rate"},
                                  {"hidden", "1024,512", "hidden layer sizes"}}),
                 "",
                 cmd_train_single});
  out.push_back({"distill", "distill experts into one multi-chair policy",
                 with(kPlanKeys, {{"ae", "", "autoencoder checkpoint (default: <dataset>/ae.ckpt)"},
                                  {"experts", "", "train-single output directory"},
                                  {"min_success", "0", "experts need a success rate above this"},
                                  {"episodes", "5", "greedy rollouts per expert"},
                                  {"holdout", "1", "rollouts per expert kept for evaluation"},
                                  {"augment", "4", "noisy copies per state"},
                                  {"noise", "0.01", "point jitter in unit-box scale"},
                                  {"max_states", "10000", "planner cap per mating query"},
                                  {"epochs", "60", "epochs"},
                                  {"batch", "32", "batch size"},
                                  {"lr", "0.001", "Adam learning rate"},
                                  {"lambda", "50", "weight of the action-ranking term"},
                                  {"hidden", "1024,512", "hidden layer sizes"}}),
                 "",
                 cmd_distill});
  out.push_back({"eval", "greedy rollouts of a policy checkpoint",
                 with(kPlanKeys, {{"ae", "", "autoencoder checkpoint (default: <dataset>/ae.ckpt)"},
                                  {"policy", "", "Q-network checkpoint"},
                                  {"split", "test", "chairs to evaluate"},
                                  {"chairs", "", "comma-separated chair ids (overrides split)"},
                                  {"episodes", "5", "episodes per chair"},
                                  {"max_states", "100000", "planner cap per mating query"},
                                  {"caps", "", "expected P,K,W (checked against the checkpoint)"}}),
                 "",
                 cmd_eval});
  out.push_back({"baseline", "plan every part at once with RRT-Connect",
                 with(kPlanKeys, {{"split", "test", "chairs to plan"},
                                  {"chairs", "", "comma-separated chair ids (overrides split)"},
                                  {"episodes", "5", "initial layouts per chair"},
                                  {"max_states", "100000", "planner cap per chair"}}),
                 "",
                 cmd_baseline});
  out.push_back({"export-traj", "write one OBJ scene per logged step",
                 {{"dataset", "", "dataset directory"},
                  {"log", "", "trajectory log (JSON lines)"},
                  {"chair", "", "chair id (default: parsed from the log name)"},
                  {"episode", "-1", "episode to export, -1 for all"},
                  {"out", "", "output directory"}},
                 "log",
                 cmd_export_traj});
  out.push_back({"report", "merge run metrics into one table",
                 {{"runs", "", "run directories containing metrics.csv"},
                  {"out", "", "output directory (default: print the CSV)"}},
                 "runs",
                 cmd_report});
  return out;
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> all = build_commands();
  return all;
}

const Command& find_command(const std::string& name) {
  for (const Command& c : commands()) {
    if (c.name == name) return c;
  }
  throw Error(ErrorCode::ConfigError, "unknown command '" + name + "'");
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::CapExceeded:
    case ErrorCode::CapMismatch:
      return 2;
    case ErrorCode::Diverged:
      return 3;
    case ErrorCode::IoError:
    case ErrorCode::SchemaVersionMismatch:
      return 4;
    default:
      return 1;
  }
}

std::vector<std::string> artifact_header(const RunConfig& config) {
  std::vector<std::string> out{"build " + build_id()};
  for (const std::string& line : config.resolved_lines()) {
    if (line.rfind("out=", 0) != 0) out.push_back("config " + line);
  }
  return out;
}

void log_line(const std::string& message) {
  static std::mutex m;
  std::lock_guard lock(m);
  std::cerr << "[partforge] " << message << '\n';
}

}  // namespace partforge::cli
