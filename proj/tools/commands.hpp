// commands.hpp: subcommands of the dicke tool. Each writes CSV tables whose
// first lines are '#' comments with the tool version and resolved config.

#pragma once

#include "run_config.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dicke::cli {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  std::optional<unsigned> workers;  // overrides the config
  std::optional<Engine> engine;     // restricts protocol/sweep to one engine
  std::optional<unsigned long long> seed;  // reserved; nothing is random yet
};

enum ExitCode { kExitOk = 0, kExitPhysics = 1, kExitIo = 2 };

const std::vector<std::string>& command_names();

// Files written by `command` into the output directory.
std::vector<std::string> output_files(const std::string& command);

// Writers used by run_command, exposed for tests.
void write_spectrum(std::ostream& out, const RunConfig& config, unsigned workers);
void write_gap(std::ostream& out, const RunConfig& config, unsigned workers);
void write_evolve(std::ostream& out, const RunConfig& config);
// `trajectories` receives the per-time comparison; `finals` the closed-form
// end populations. Ends `trajectories` with "# summary: max_abs_diff=<v> points=<n>".
double write_demkov(std::ostream& trajectories, std::ostream& finals, const RunConfig& config,
                    unsigned workers);
// Returns false if some sweep point recorded an error (the table is still
// complete, with the message in the error column).
bool write_protocol(std::ostream& out, const RunConfig& config, const CommandOptions& options,
                    bool require_sweep);

// Runs a subcommand, writing each output through a temporary file that is
// renamed on success and removed on failure. Exceptions propagate: IoError
// for file problems, ValidationError / NumericalError for physics. Returns
// kExitPhysics if a sweep completed with per-point errors.
int run_command(const std::string& command, const RunConfig& config,
                const CommandOptions& options);

// Maps the exception in flight to an exit code and prints it to stderr.
int report_exception(std::ostream& err);

}  // namespace dicke::cli
