#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"

namespace kgen::cli {

enum class Command { eval, solve, entropy, stability, thermo, ergodic };
enum class Format { report, summary };

/// One batch invocation: a command, an input document, optional kappa
/// overrides and tolerance overrides. Tolerances default to the profile named
/// by the KGEN_TOLERANCE_PROFILE environment variable (default / strict /
/// loose) and the built-in `default` profile when unset.
struct RunConfig {
  Command command = Command::eval;
  std::string input_path;
  std::string output_path;  // empty = standard output
  std::optional<double> kappa;
  std::vector<double> kappa_sweep;
  std::optional<double> tolerance;
  std::optional<int> max_iterations;
  Format format = Format::report;
};

struct RunResult {
  int exit_code = 0;
  nlohmann::ordered_json report;
  std::string rendered;  // what main() writes: the report dump or the summary
};

Command parse_command(const std::string& name);
std::string command_name(Command command);

/// Reads config.input_path, dispatches, and assembles the report. Never
/// throws: failures come back as an error report plus exit code 1
/// (computational failure) or 2 (parse/validation error).
RunResult run(const RunConfig& config);

/// Same as run() but on an already-parsed problem document; used by the echo
/// round-trip and by tests.
RunResult run_on_document(const RunConfig& config,
                          const nlohmann::ordered_json& problem);

/// Rebuilds a RunConfig from a report's input_echo block (paths excluded).
RunConfig config_from_echo(const nlohmann::ordered_json& input_echo);

/// Two-column ensemble file: header `energy` or `energy,probability`,
/// comma-separated numeric rows.
struct EnsembleFile {
  Eigen::ArrayXd energies;
  std::optional<Eigen::ArrayXd> probabilities;
};

EnsembleFile parse_ensemble_csv(const std::string& text);

}  // namespace kgen::cli
