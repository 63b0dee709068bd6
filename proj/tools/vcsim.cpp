#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <sstream>

#include "vcsim/config.hpp"
#include "vcsim/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"vehicular cloud task placement simulator"};
  app.require_subcommand(1);
  app.fallthrough();  // common flags may follow the subcommand

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int jobs = 1;
  bool event_log = false;

  app.add_option("--config", config_path, "configuration file (key = value sections)")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (created if missing)");
  auto* seed_opt = app.add_option(
      "--seed", seed, "override the run seed and collapse the seed list to it");
  app.add_option("--jobs", jobs, "parallel sweep cells")->check(CLI::PositiveNumber);
  app.add_flag("--event-log", event_log, "write a per-run event trace csv");

  auto* lut = app.add_subcommand("lut", "build the reliability lookup table");
  auto* gen = app.add_subcommand("gen", "generate vu and task traces");
  auto* run = app.add_subcommand("run", "simulate over the configured seeds");
  app.add_subcommand("compare", "paired proposed-vs-sota sweeps");

  CLI11_PARSE(app, argc, argv);

  vcsim::config::RunConfig cfg;
  try {
    if (config_path.empty()) {
      std::istringstream empty;  // defaults, with derived fields filled in
      cfg = vcsim::config::parse_config(empty);
    } else {
      cfg = vcsim::config::parse_config_file(config_path);
    }
    if (seed_opt->count() > 0) {
      cfg.run.seed = seed;
      cfg.run.seeds = {seed};
    }
    vcsim::config::validate(cfg);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  if (app.got_subcommand(lut))
    return vcsim::driver::cmd_lut(cfg, out_dir, std::cout, std::cerr);
  if (app.got_subcommand(gen))
    return vcsim::driver::cmd_gen(cfg, out_dir, std::cout, std::cerr);
  if (app.got_subcommand(run))
    return vcsim::driver::cmd_run(cfg, out_dir, jobs, event_log, std::cout,
                                  std::cerr);
  return vcsim::driver::cmd_compare(cfg, out_dir, jobs, std::cout, std::cerr);
}
