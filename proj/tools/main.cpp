#include "commands.hpp"

#include "dicke/version.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dicke::cli::IoError("cannot read config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace dicke::cli;
  CLI::App app{"Dicke-model adiabatic metrology simulator"};
  app.set_version_flag("--version", std::string(dicke::kVersion));
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir = ".";
  unsigned workers = 0;
  std::string engine;
  unsigned long long seed = 0;

  const std::vector<std::pair<std::string, std::string>> descriptions = {
      {"spectrum", "lowest levels of H_D on an omega_x grid"},
      {"gap", "numeric vs closed-form tunnelling gap"},
      {"evolve", "full time evolution of one protocol run"},
      {"demkov", "two-level closed form vs direct integration"},
      {"protocol", "final <J_z> for one configuration (or its sweep section)"},
      {"sweep", "final <J_z> over the configured sweep grid"}};
  for (const auto& [name, text] : descriptions) {
    CLI::App* sub = app.add_subcommand(name, text);
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--workers", workers, "worker threads (overrides the config)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--engine", engine, "restrict to one engine")
        ->check(CLI::IsMember({"full", "demkov"}));
    sub->add_option("--seed", seed, "reserved; no stochastic paths");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitPhysics;
  }

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    const RunConfig config =
        config_path.empty() ? parse_run_config(nlohmann::json()) : parse_run_config_text(read_file(config_path));
    CommandOptions options;
    options.out_dir = out_dir;
    if (workers > 0) options.workers = workers;
    if (!engine.empty()) options.engine = dicke::engine_from_string(engine);
    if (app.get_subcommands().front()->count("--seed")) options.seed = seed;
    const int code = run_command(command, config, options);
    if (code != kExitOk) std::cerr << "dicke: some sweep points failed; see the error column\n";
    return code;
  } catch (...) {
    return report_exception(std::cerr);
  }
}
