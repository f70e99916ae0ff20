// Command-line driver: builds level data, samples walk trajectories, and
// emits decay-curve and tail-analysis reports.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lampwalk/config.hpp"
#include "lampwalk/errors.hpp"
#include "lampwalk/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lamplighter walk construction and tail-analysis driver"};
  app.fallthrough(true);
  app.require_subcommand(1);

  std::string config_path;
  std::string preset = "desk";
  std::uint64_t seed = 0;
  std::int64_t levels = 0;
  std::string out_dir;
  int jobs = 1;

  CLI::Option* config_opt =
      app.add_option("--config", config_path, "JSON config file");
  CLI::Option* preset_opt =
      app.add_option("--preset", preset,
                     "named preset (desk: fast growth schedule; paper: "
                     "published growth schedule; abelian: lamp-free control)")
          ->check(CLI::IsMember({"desk", "paper", "abelian"}));
  CLI::Option* seed_opt =
      app.add_option("--seed", seed, "master seed for trajectory sampling");
  CLI::Option* levels_opt =
      app.add_option("--levels", levels, "construction depth")
          ->check(CLI::PositiveNumber);
  CLI::Option* out_opt = app.add_option("--out", out_dir, "output directory");
  app.add_option("--jobs", jobs,
                 "worker count (accepted for compatibility; execution is "
                 "sequential)")
      ->check(CLI::PositiveNumber);
  config_opt->excludes(preset_opt);

  app.add_subcommand("build", "build the level data and write the cache");
  app.add_subcommand("sample", "sample trajectories to a dump file");
  app.add_subcommand("tv", "decay-curve CSVs for the configured elements");
  app.add_subcommand("tau", "tail histogram and non-degeneracy report");
  app.add_subcommand("verify", "re-verify an existing cache exhaustively");
  app.add_subcommand("report", "summary document with SVG charts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lampwalk::kExitConfig;
  }

  try {
    lampwalk::RunConfig cfg =
        config_opt->count() > 0
            ? lampwalk::RunConfig::from_json_file(config_path)
            : lampwalk::RunConfig::by_preset(preset);
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (levels_opt->count() > 0) cfg.levels = levels;
    if (out_opt->count() > 0) cfg.out_dir = out_dir;
    const std::string command = app.get_subcommands().front()->get_name();
    return lampwalk::dispatch(command, cfg);
  } catch (const lampwalk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return lampwalk::kExitInternal;
  }
}
