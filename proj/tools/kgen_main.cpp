#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "kgen/cli.hpp"
#include "kgen/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"kappa-generalized statistics toolkit: deformed special "
               "functions, constrained path ensembles, entropy generation and "
               "ergodic diagnostics"};
  app.require_subcommand(1);

  std::string input, output, format = "report";
  std::optional<double> kappa, tol;
  std::optional<int> max_iter;
  std::vector<double> kappa_sweep;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"eval", "evaluate a deformed special function on a list of arguments"},
      {"solve", "solve a constrained path-ensemble problem"},
      {"entropy", "kappa-entropy of an ensemble file"},
      {"stability", "stability criterion of an ensemble file"},
      {"thermo", "entropy generation from macroscopic process data"},
      {"ergodic", "time averages, steady states, spectral regularity"},
  };
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--input", input, "input file (JSON problem or ensemble CSV)")
        ->required();
    sub->add_option("--output", output, "output file (default: stdout)");
    sub->add_option("--kappa", kappa, "deformation parameter, |kappa| < 1");
    sub->add_option("--kappa-sweep", kappa_sweep,
                    "comma-separated kappa values; one result per value")
        ->delimiter(',');
    sub->add_option("--tol", tol, "solver tolerance override");
    sub->add_option("--max-iter", max_iter, "solver iteration cap override");
    sub->add_option("--format", format, "report (JSON) or summary (text)")
        ->check(CLI::IsMember({"report", "summary"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  kgen::cli::RunConfig config;
  config.command = kgen::cli::parse_command(app.get_subcommands().front()->get_name());
  config.input_path = input;
  config.output_path = output;
  config.kappa = kappa;
  config.kappa_sweep = kappa_sweep;
  config.tolerance = tol;
  config.max_iterations = max_iter;
  config.format = format == "summary" ? kgen::cli::Format::summary
                                      : kgen::cli::Format::report;

  const kgen::cli::RunResult result = kgen::cli::run(config);

  if (config.output_path.empty()) {
    std::cout << result.rendered;
  } else {
    std::ofstream out(config.output_path, std::ios::binary);
    if (!out) {
      std::cerr << "error (io_error): cannot write output file '"
                << config.output_path << "'\n";
      return 2;
    }
    out << result.rendered;
  }
  return result.exit_code;
}
