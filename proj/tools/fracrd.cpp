#include <iostream>

#include <CLI11.hpp>

#include "fracrd/app.hpp"
#include "fracrd/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fractional reaction-diffusion solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string budget = "fast";
  std::string table;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->add_option("--seed", seed, "Seed for check sampling");
    cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* run = app.add_subcommand("run", "Run a configuration");
  run->add_option("config,--config", config_path, "Configuration file");
  add_common(run);

  auto* check = app.add_subcommand("check", "Structural checks of a configuration's reaction");
  check->add_option("config,--config", config_path, "Configuration file");
  add_common(check);

  auto* reproduce = app.add_subcommand("reproduce", "Reproduce a published steady-state table");
  reproduce->add_option("table", table, "T1 or T2")->required()->check(CLI::IsMember({"T1", "T2"}));
  reproduce->add_option("--budget", budget, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  add_common(reproduce);

  auto* convergence = app.add_subcommand("convergence", "Time-step convergence against the exact heat semigroup");
  add_common(convergence);

  CLI11_PARSE(app, argc, argv);

  fracrd::CommandOptions options;
  if (!out_dir.empty()) options.out_dir = out_dir;
  for (auto* cmd : {run, check, reproduce, convergence})
    if (cmd->count("--seed")) options.seed = seed;
  options.threads = threads;

  try {
    if (*run || *check) {
      if (config_path.empty()) {
        std::cerr << "a configuration file is required\n";
        return 2;
      }
      return *run ? fracrd::command_run(config_path, options, std::cout)
                  : fracrd::command_check(config_path, options, std::cout);
    }
    if (*reproduce)
      return fracrd::command_reproduce(fracrd::table_from_string(table), fracrd::budget_from_string(budget), options,
                                       std::cout);
    return fracrd::command_convergence(options, std::cout);
  } catch (const fracrd::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
