#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hps/app/commands.hpp"
#include "hps/app/config.hpp"

int main(int argc, char** argv) {
  CLI::App cli{"High-order direct solver for -div(a grad phi) + b phi = 0 with Neumann data"};
  cli.require_subcommand(1);
  cli.fallthrough();

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  unsigned seed = 0;
  cli.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  cli.add_option("--out", out_dir, "Output directory (overrides run.out)");
  cli.add_option("--threads", threads, "Worker threads (overrides run.threads)")->check(CLI::PositiveNumber);
  cli.add_option("--seed", seed, "Reserved; all algorithms are deterministic");

  const char* help[] = {"Build, solve and write the edge solution", "Error against n_gauss",
                        "Flop counts against tree depth", "Ranks of off-diagonal operator blocks",
                        "Cross-path, reciprocity, merge-order and FD oracle checks"};
  std::size_t k = 0;
  for (const std::string& name : hps::app::command_names()) cli.add_subcommand(name, help[k++]);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : hps::app::kExitConfig;
  }

  hps::app::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = hps::app::load_config(config_path);
  } catch (const hps::app::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return hps::app::kExitConfig;
  }
  hps::app::CommandOptions options;
  options.out_dir = out_dir.empty() ? cfg.out_dir : out_dir;
  options.threads = threads > 0 ? threads : cfg.threads;
  options.seed = seed;
  return hps::app::run_command(cli.get_subcommands().front()->get_name(), cfg, options, std::cout, std::cerr);
}
