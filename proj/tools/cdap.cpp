#include "cdap/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Constraint-dissolving alternating projections: feasibility solver and benchmarks"};
  app.require_subcommand(1);

  std::string config;
  cdap::cli::Overrides overrides;
  std::string out;
  std::int64_t seed = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config, "YAML config file")->required();
    sub->add_option("--out", out, "Output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "Problem seed (overrides the config's seeds)")->check(CLI::NonNegativeNumber);
    sub->add_flag("--plot", overrides.plot, "Write SVG residual plots");
  };
  CLI::App* run = app.add_subcommand("run", "Solve one instance and write trace, summary and plot");
  CLI::App* bench = app.add_subcommand("bench", "Run a suite of cells and write the comparison table");
  add_common(run);
  add_common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;  // usage errors count as configuration errors
  }
  if (!out.empty()) overrides.out = out;
  if (seed >= 0) overrides.seed = static_cast<std::uint64_t>(seed);

  if (run->parsed()) return cdap::cli::cmd_run(config, overrides, std::cout, std::cerr);
  return cdap::cli::cmd_bench(config, overrides, std::cout, std::cerr);
}
