// Command-line front end: synth, run, sweep, bounds, compare.
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sepembed/config.hpp"
#include "sepembed/error.hpp"
#include "sepembed/experiment.hpp"

namespace {

using sepembed::config::ExperimentConfig;

struct Subcommand {
  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::optional<std::string>> overrides;
  int (*handler)(const ExperimentConfig&) = nullptr;
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Supervised Laplacian embeddings with RBF out-of-sample extension"};
  app.require_subcommand(1);

  const std::pair<const char*, const char*> commands[] = {
      {"synth", "write synthetic two-class datasets"},
      {"run", "run one configuration per seed into runs.csv"},
      {"sweep", "sweep the configured axes over all seeds into sweep.csv"},
      {"bounds", "evaluate separability and probability bounds into bounds.csv"},
      {"compare", "compare embeddings and baselines into compare.csv"},
  };
  int (*const handlers[])(const ExperimentConfig&) = {
      sepembed::experiment::cmd_synth, sepembed::experiment::cmd_run, sepembed::experiment::cmd_sweep,
      sepembed::experiment::cmd_bounds, sepembed::experiment::cmd_compare};

  std::vector<Subcommand> subs(std::size(commands));
  for (std::size_t i = 0; i < subs.size(); ++i) {
    auto& s = subs[i];
    s.app = app.add_subcommand(commands[i].first, commands[i].second);
    s.handler = handlers[i];
    s.app->add_option("--config", s.config_path, "configuration file");
    for (const auto& key : sepembed::config::known_keys()) {
      auto& slot = s.overrides[std::string(key.key)];
      s.app->add_option("--" + std::string(key.key), slot, std::string(key.help))->group(std::string(key.section));
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const auto& s : subs) {
    if (!s.app->parsed()) continue;
    try {
      ExperimentConfig cfg;
      if (!s.config_path.empty()) sepembed::config::load_file(cfg, s.config_path);
      // Overrides applied in file order so list-valued keys behave the same
      // way as in the file.
      for (const auto& key : sepembed::config::known_keys()) {
        const auto& v = s.overrides.at(std::string(key.key));
        if (v) sepembed::config::apply(cfg, key.key, *v);
      }
      return s.handler(cfg);
    } catch (const sepembed::InputError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    } catch (const sepembed::NumericalError& e) {
      std::cerr << "numerical failure: " << e.what() << '\n';
      return 3;
    }
  }
  return 2;
}
