#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gaffney/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"gaffney-lab: numerical experiments around div/curl gradient estimates"};
  app.require_subcommand(1);

  std::string config_path;
  gaffney::JobConfig cfg;

  // shared flags; each subcommand sees the same set and unrelated ones are ignored
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file (flags override it)");
    sub->add_option("--domain", cfg.domain, "square | lshape | hexagon | polygon:<sides>");
    sub->add_option("--k", cfg.k, "subdivision parameter of the base mesh");
    sub->add_option("--levels", cfg.levels, "refinement levels");
    sub->add_option("--spec", cfg.spec, "boundary spec: inline JSON or file path");
    sub->add_option("--family", cfg.family, "counterexample family name");
    sub->add_option("--ns", cfg.ns, "frequency parameters")->delimiter(',');
    sub->add_option("--lambda", cfg.lambda, "lambda expression 'f1,f2'");
    sub->add_option("--x0", cfg.x0, "base point");
    sub->add_option("--r", cfg.r, "box radius");
    sub->add_option("--eps", cfg.eps, "trace inequality epsilon");
    sub->add_option("--grid", cfg.grid, "rectify sample grid per axis");
    sub->add_option("--out", cfg.out, "output file (default: stdout)");
    sub->add_option("--seed", cfg.seed, "seed recorded in the output header");
    sub->add_option("--fields", cfg.fields, "verify corpus selection")->delimiter(',');
  };

  std::vector<std::string> commands = {"constant", "verify", "blowup",
                                       "rectify", "mesh", "trace"};
  for (const auto& name : commands) add_common(app.add_subcommand(name));

  // Parse once to learn the config path, load it, then reparse so that
  // explicit flags override file values.
  try {
    app.parse(argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();
    if (!config_path.empty()) {
      cfg = gaffney::JobConfig::from_json_file(config_path);
      if (!cfg.command.empty() && cfg.command != command) {
        std::cerr << "config names command '" << cfg.command
                  << "' but the subcommand is '" << command << "'\n";
        return gaffney::kInvalidInput;
      }
      for (auto* sub : app.get_subcommands()) sub->clear();
      app.clear();
      app.parse(argc, argv);
    }
    cfg.command = command;
    if (app.get_subcommands().front()->count("--fields") > 0)
      cfg.fields_given = true;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : gaffney::kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return gaffney::kInvalidInput;
  }

  return gaffney::run_command(cfg, std::cout, std::cerr);
}
