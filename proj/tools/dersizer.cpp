#include "dersizer/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Microgrid genset and battery sizing"};
  std::string verb;
  dersizer::RunManifest manifest;
  std::uint64_t seed = 0;

  app.add_option("verb", verb, "lcoe | qfd | reliability-curve | plan | sweep")->required();
  app.add_option("--config", manifest.config_path, "JSON configuration file")->required();
  app.add_option("--out", manifest.output_dir, "Output directory")->required();
  auto* seed_opt = app.add_option("--seed", seed, "Master seed override");
  app.add_option("--threads", manifest.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", manifest.verbosity, "Report written artifacts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? dersizer::kExitOk : dersizer::kExitUsage;
  }

  const auto command = dersizer::parse_command(verb);
  if (!command) {
    std::cerr << "unknown command '" << verb << "'\n" << app.help();
    return dersizer::kExitUsage;
  }
  manifest.command = *command;
  if (*seed_opt) manifest.seed = seed;
  return dersizer::run(manifest, std::cerr);
}
