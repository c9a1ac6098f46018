#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "beam/commands.hpp"
#include "beam/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Galerkin simulator and attractor diagnostics for the "
               "extensible beam with rotational inertia"};
  app.set_version_flag("--version", beam::VersionString());
  app.require_subcommand(1, 1);

  std::string config_file;
  std::string out_dir = "beam-out";
  for (const auto& name : beam::SubcommandNames()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_file, "experiment file (key = value)")
        ->required();
    sub->add_option("--out", out_dir, "output directory")
        ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code != 0) {
      std::cerr << "error code=1 kind=usage message=\"" << e.what() << "\"\n";
      return beam::kExitRuntimeError;
    }
    return beam::kExitOk;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  beam::ExperimentConfig config;
  try {
    std::ifstream in(config_file);
    if (!in) throw beam::ConfigError("cannot read config file " + config_file);
    std::stringstream text;
    text << in.rdbuf();
    config = beam::ParseConfig(text.str());
  } catch (const beam::ConfigError& e) {
    std::cerr << "error code=1 kind=config message=\"" << e.what() << "\"\n";
    return beam::kExitRuntimeError;
  }
  return beam::RunSubcommand(name, config, config_file, out_dir, std::cout,
                             std::cerr);
}
