#include <algorithm>
#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

using namespace partforge;

int main(int argc, char** argv) {
  CLI::App app{"partforge: learning to assemble generated chairs"};
  app.require_subcommand(1);

  struct Flags {
    std::string dataset, seed, out, max_states, budget, caps;
    std::vector<std::string> config_files, sets, positional;
  };
  std::vector<std::pair<CLI::App*, const cli::Command*>> subs;
  std::vector<Flags> flags(cli::commands().size());
  for (std::size_t i = 0; i < cli::commands().size(); ++i) {
    const cli::Command& cmd = cli::commands()[i];
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.description);
    Flags& f = flags[i];
    sub->add_option("--dataset", f.dataset, "dataset directory");
    sub->add_option("--seed", f.seed, "run seed");
    sub->add_option("--out", f.out, "output location");
    sub->add_option("--max-states", f.max_states, "planner state cap");
    sub->add_option("--budget", f.budget, "training step budget");
    sub->add_option("--caps", f.caps, "action caps P,K,W");
    sub->add_option("--config", f.config_files, "key=value config file (repeatable)");
    sub->add_option("--set,-D", f.sets, "key=value override (repeatable)");
    // Remaining "--some-key value" pairs are routed to config key some_key.
    sub->allow_extras();
    std::string keys;
    for (const cli::KeySpec& k : cmd.keys) {
      keys += "  " + k.key + " (default '" + k.default_value + "'): " + k.help + "\n";
    }
    if (!cmd.positional_key.empty()) keys += "Positional arguments set " + cmd.positional_key + ".\n";
    sub->footer("Config keys:\n" + keys);
    subs.emplace_back(sub, &cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i].first->parsed()) continue;
    const cli::Command& cmd = *subs[i].second;
    Flags& f = flags[i];
    try {
      cli::RunConfig config(cmd.keys);
      for (const std::string& path : f.config_files) config.load_file(path);
      const std::pair<const char*, const std::string*> direct[] = {
          {"dataset", &f.dataset}, {"seed", &f.seed},     {"out", &f.out},
          {"max_states", &f.max_states}, {"budget", &f.budget}, {"caps", &f.caps}};
      for (const auto& [key, value] : direct) {
        if (!value->empty()) config.set(key, *value);
      }
      const std::vector<std::string> extras = subs[i].first->remaining();
      for (std::size_t j = 0; j < extras.size(); ++j) {
        std::string name = extras[j];
        if (name.rfind("--", 0) != 0) {
          if (cmd.positional_key.empty() || name.rfind('-', 0) == 0) {
            throw Error(ErrorCode::ConfigError, "unexpected argument '" + name + "'");
          }
          f.positional.push_back(name);
          continue;
        }
        name = name.substr(2);
        std::string value;
        if (const auto eq = name.find('='); eq != std::string::npos) {
          value = name.substr(eq + 1);
          name = name.substr(0, eq);
        } else if (j + 1 < extras.size()) {
          value = extras[++j];
        } else {
          throw Error(ErrorCode::ConfigError, "--" + name + " needs a value");
        }
        std::replace(name.begin(), name.end(), '-', '_');
        config.set(name, value);
      }
      for (const std::string& s : f.sets) config.set_assignment(s);
      if (!f.positional.empty()) {
        std::string joined;
        for (const std::string& p : f.positional) joined += (joined.empty() ? "" : ",") + p;
        config.set(cmd.positional_key, joined);
      }
      cmd.run(config);
      return 0;
    } catch (const Error& e) {
      std::cerr << "partforge " << cmd.name << ": " << e.what() << '\n';
      return cli::exit_code(e.code());
    } catch (const std::exception& e) {
      std::cerr << "partforge " << cmd.name << ": " << e.what() << '\n';
      return 1;
    }
  }
  return 2;
}
