#include <CLI11.hpp>
#include <iostream>

#include "fmcf/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Traveling waves of forced mean curvature flow on the periodic torus"};
  app.require_subcommand(1);
  fmcf::CommandOptions opt;
  for (const char* name : {"check", "speed", "wave", "evolve", "crosscheck"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config, "JSON run configuration")->required();
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_flag("--skip-oracle", opt.skip_oracle, "do not run the shooting oracle");
    sub->add_flag("--quiet", opt.quiet, "suppress progress output");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : fmcf::kExitError;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  return fmcf::run_command(name, opt, std::cout, std::cerr);
}
