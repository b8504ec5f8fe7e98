#include "kgen/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kgen/ensemble.hpp"
#include "kgen/entropy.hpp"
#include "kgen/ergodic.hpp"
#include "kgen/errors.hpp"
#include "kgen/kappa.hpp"
#include "kgen/version.hpp"

namespace kgen::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------- utilities

std::string read_text_file(const std::string& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) throw error("io_error", "cannot read input file '" + path + "'");
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return buffer.str();
}

void reject_unknown_fields(const ordered_json& obj,
                           std::initializer_list<std::string_view> allowed,
                           const char* where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (std::string_view key : allowed)
      if (key == item.key()) {
        known = true;
        break;
      }
    if (!known)
      throw error("unknown_field",
                  std::string(where) + ": unknown field '" + item.key() + "'");
  }
}

const ordered_json& require_field(const ordered_json& obj, const char* key,
                                  const char* where) {
  const auto it = obj.find(key);
  if (it == obj.end())
    throw error("missing_field",
                std::string(where) + ": missing required field '" + key + "'");
  return *it;
}

double number_value(const ordered_json& value, const std::string& what) {
  if (!value.is_number()) throw error("invalid_value", what + " must be a number");
  return value.get<double>();
}

double number_field(const ordered_json& obj, const char* key, const char* where) {
  return number_value(require_field(obj, key, where), std::string(where) + "." + key);
}

double number_field_or(const ordered_json& obj, const char* key, double fallback,
                       const char* where) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  return number_value(*it, std::string(where) + "." + key);
}

std::int64_t integer_value(const ordered_json& value, const std::string& what) {
  if (value.is_number_integer()) return value.get<std::int64_t>();
  if (value.is_number_float()) {
    const double d = value.get<double>();
    if (std::floor(d) == d && std::abs(d) <= 9007199254740992.0)
      return static_cast<std::int64_t>(d);
  }
  throw error("invalid_value", what + " must be an integer");
}

std::string string_value(const ordered_json& value, const std::string& what) {
  if (!value.is_string()) throw error("invalid_value", what + " must be a string");
  return value.get<std::string>();
}

Eigen::ArrayXd array_value(const ordered_json& value, const std::string& what) {
  if (!value.is_array() || value.empty())
    throw error("invalid_value", what + " must be a non-empty array of numbers");
  Eigen::ArrayXd out(static_cast<Eigen::Index>(value.size()));
  Eigen::Index i = 0;
  for (const auto& element : value)
    out[i++] = number_value(element, what + " entries");
  return out;
}

ordered_json json_array(const Eigen::ArrayXd& values) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < values.size(); ++i) out.push_back(values[i]);
  return out;
}

// ------------------------------------------------------- tolerance profiles

struct Tolerances {
  std::string profile = "default";
  double tolerance = 1e-10;
  int max_iterations = 200;
};

Tolerances resolve_tolerances(const RunConfig& config) {
  Tolerances tols;
  if (const char* env = std::getenv("KGEN_TOLERANCE_PROFILE")) {
    const std::string name(env);
    if (name == "default") {
    } else if (name == "strict") {
      tols = Tolerances{"strict", 1e-12, 400};
    } else if (name == "loose") {
      tols = Tolerances{"loose", 1e-8, 100};
    } else {
      throw config_error("invalid_tolerance_profile",
                         "KGEN_TOLERANCE_PROFILE must be default, strict or "
                         "loose; got '" +
                             name + "'");
    }
  }
  if (config.tolerance) {
    if (!(*config.tolerance > 0.0))
      throw config_error("invalid_tolerance", "--tol must be > 0");
    tols.tolerance = *config.tolerance;
  }
  if (config.max_iterations) {
    if (*config.max_iterations < 1)
      throw config_error("invalid_max_iterations", "--max-iter must be >= 1");
    tols.max_iterations = *config.max_iterations;
  }
  return tols;
}

// ------------------------------------------------------------------ kappa

bool command_uses_kappa(Command command) {
  return command == Command::eval || command == Command::solve ||
         command == Command::entropy || command == Command::stability;
}

void validate_kappa(double value) {
  const KappaParam<double> checked(value);
  (void)checked;
}

double resolve_single_kappa(const RunConfig& config, const ordered_json& problem) {
  if (config.kappa) return *config.kappa;
  if ((config.command == Command::eval || config.command == Command::solve) &&
      problem.contains("kappa"))
    return number_value(problem["kappa"], "problem.kappa");
  throw config_error("missing_kappa",
                     "no kappa given: pass --kappa (eval/solve problems may "
                     "embed a `kappa` field instead)");
}

// ------------------------------------------------------------ per command

struct CommandOutput {
  ordered_json result;
  ordered_json diagnostics = ordered_json::object();
};

CommandOutput handle_eval(const ordered_json& problem, double kappa) {
  reject_unknown_fields(problem, {"function", "arguments", "kappa"}, "eval problem");
  const std::string function =
      string_value(require_field(problem, "function", "eval problem"),
                   "eval problem.function");
  const Eigen::ArrayXd arguments =
      array_value(require_field(problem, "arguments", "eval problem"),
                  "eval problem.arguments");
  const KappaParam<double> kp(kappa);

  Eigen::ArrayXd values(arguments.size());
  for (Eigen::Index i = 0; i < arguments.size(); ++i) {
    if (function == "kappa_exp")
      values[i] = kappa_exp(arguments[i], kp);
    else if (function == "kappa_log")
      values[i] = kappa_log(arguments[i], kp);
    else if (function == "kappa_log_deriv")
      values[i] = kappa_log_deriv(arguments[i], kp);
    else
      throw config_error("unknown_function",
                         "unknown function '" + function +
                             "'; known: kappa_exp, kappa_log, kappa_log_deriv");
  }

  CommandOutput out;
  out.result["kappa"] = kappa;
  out.result["function"] = function;
  out.result["values"] = json_array(values);
  return out;
}

CommandOutput handle_solve(const ordered_json& problem, double kappa,
                           const Tolerances& tols) {
  reject_unknown_fields(
      problem, {"energies", "energies_file", "target_energy", "kappa", "temperature", "lambda"},
      "solve problem");
  EnsembleProblem ensemble_problem;
  ensemble_problem.energies =
      array_value(require_field(problem, "energies", "solve problem"),
                  "solve problem.energies");
  ensemble_problem.target_energy =
      number_field(problem, "target_energy", "solve problem");
  ensemble_problem.kappa = KappaParam<double>(kappa);
  ensemble_problem.temperature =
      number_field_or(problem, "temperature", 1.0, "solve problem");
  ensemble_problem.lambda = number_field_or(problem, "lambda", 2.0, "solve problem");

  const EnsembleSolution solution =
      solve_ensemble(ensemble_problem, tols.tolerance, tols.max_iterations);

  CommandOutput out;
  out.result["kappa"] = kappa;
  out.result["alpha"] = solution.alpha;
  out.result["beta"] = solution.beta;
  out.result["mu"] = solution.mu;
  out.result["probabilities"] = json_array(solution.ensemble.probabilities());
  out.result["mean_energy"] = mean_energy(solution.ensemble);
  out.result["multiplier_identification"] =
      "beta = 1/(lambda*T); mu = E_ref = min energy";
  out.diagnostics["converged"] = solution.converged;
  out.diagnostics["iterations"] = solution.iterations;
  out.diagnostics["method"] =
      solution.method == SolveMethod::newton ? "newton" : "bisection";
  out.diagnostics["residual_norm"] = solution.residual_norm;
  return out;
}

PathEnsemble ensemble_from_document(const ordered_json& problem, const char* where) {
  reject_unknown_fields(problem, {"energies", "probabilities"}, where);
  const Eigen::ArrayXd energies = array_value(
      require_field(problem, "energies", where), std::string(where) + ".energies");
  const Eigen::ArrayXd probabilities =
      array_value(require_field(problem, "probabilities", where),
                  std::string(where) + ".probabilities");
  return PathEnsemble(energies, probabilities);
}

CommandOutput handle_entropy(const ordered_json& problem, double kappa) {
  const PathEnsemble ensemble = ensemble_from_document(problem, "entropy problem");
  const KappaParam<double> kp(kappa);
  CommandOutput out;
  out.result["kappa"] = kappa;
  out.result["kappa_entropy"] = kappa_entropy(ensemble, kp);
  out.result["mean_energy"] = mean_energy(ensemble);
  return out;
}

CommandOutput handle_stability(const ordered_json& problem, double kappa) {
  const PathEnsemble ensemble = ensemble_from_document(problem, "stability problem");
  const StabilityReport report = stability_ratio(ensemble, KappaParam<double>(kappa));
  CommandOutput out;
  out.result["kappa"] = kappa;
  out.result["ratio"] = report.ratio;
  out.result["threshold"] = report.threshold;
  out.result["margin"] = report.margin;
  out.result["stable"] = report.stable;
  out.result["entropy_derivative"] = report.entropy_derivative;
  out.result["consistent"] = report.consistent;
  return out;
}

CommandOutput handle_thermo(const ordered_json& problem) {
  reject_unknown_fields(
      problem, {"Q_r", "T_r", "T_a", "dH", "dS", "dEk", "dEg", "W", "T_ref"},
      "thermo problem");
  ThermoState state;
  state.Q_r = number_field_or(problem, "Q_r", 0.0, "thermo problem");
  state.T_r = number_field(problem, "T_r", "thermo problem");
  state.T_a = number_field(problem, "T_a", "thermo problem");
  state.dH = number_field_or(problem, "dH", 0.0, "thermo problem");
  state.dS = number_field_or(problem, "dS", 0.0, "thermo problem");
  state.dEk = number_field_or(problem, "dEk", 0.0, "thermo problem");
  state.dEg = number_field_or(problem, "dEg", 0.0, "thermo problem");
  state.W = number_field_or(problem, "W", 0.0, "thermo problem");
  state.T_ref = number_field(problem, "T_ref", "thermo problem");

  const double entropy_generation = thermo_entropy_generation(state);
  CommandOutput out;
  out.result["entropy_generation"] = entropy_generation;
  out.result["lost_work"] = lost_work(state);
  out.result["lagrangian"] = thermodynamic_lagrangian(entropy_generation, state.T_ref);
  return out;
}

MapSpec map_from_document(const ordered_json& doc) {
  const std::string kind =
      string_value(require_field(doc, "kind", "map"), "map.kind");
  if (kind == "rotation") {
    reject_unknown_fields(doc, {"kind", "frequency"}, "rotation map");
    return MapSpec::rotation(number_field(doc, "frequency", "rotation map"));
  }
  if (kind == "doubling") {
    reject_unknown_fields(doc, {"kind"}, "doubling map");
    return MapSpec::doubling();
  }
  if (kind == "affine_contraction") {
    reject_unknown_fields(doc, {"kind", "factor", "offset"}, "affine map");
    return MapSpec::affine_contraction(number_field(doc, "factor", "affine map"),
                                       number_field(doc, "offset", "affine map"));
  }
  throw config_error("unknown_map",
                     "unknown map kind '" + kind +
                         "'; known: rotation, doubling, affine_contraction");
}

CommandOutput handle_ergodic(const ordered_json& problem) {
  const std::string task =
      string_value(require_field(problem, "task", "ergodic problem"),
                   "ergodic problem.task");
  CommandOutput out;

  if (task == "birkhoff") {
    reject_unknown_fields(
        problem, {"task", "map", "observable", "x0", "steps", "space_average", "tolerance"},
        "birkhoff problem");
    const ordered_json& map_doc = require_field(problem, "map", "birkhoff problem");
    if (!map_doc.is_object())
      throw error("invalid_value", "birkhoff problem.map must be an object");
    const MapSpec map = map_from_document(map_doc);
    const std::string observable =
        string_value(require_field(problem, "observable", "birkhoff problem"),
                     "birkhoff problem.observable");
    const double x0 = number_field(problem, "x0", "birkhoff problem");
    const std::int64_t steps =
        integer_value(require_field(problem, "steps", "birkhoff problem"),
                      "birkhoff problem.steps");
    const double space_average =
        number_field(problem, "space_average", "birkhoff problem");
    const double tolerance = number_field(problem, "tolerance", "birkhoff problem");

    const BirkhoffReport report =
        birkhoff_check(map, observable, x0, steps, space_average, tolerance);
    out.result["task"] = task;
    out.result["observable"] = report.observable;
    out.result["time_average"] = report.time_average;
    out.result["space_average"] = report.space_average;
    out.result["deviation"] = report.deviation;
    out.result["tolerance"] = report.tolerance;
    out.result["pass"] = report.pass;
    out.diagnostics["steps"] = report.steps;
    return out;
  }

  if (task == "time_average") {
    reject_unknown_fields(problem, {"task", "values", "dt"}, "time_average problem");
    const ObservableSeries series(
        array_value(require_field(problem, "values", "time_average problem"),
                    "time_average problem.values"),
        number_field_or(problem, "dt", 1.0, "time_average problem"));
    out.result["task"] = task;
    out.result["time_average"] = time_average(series);
    out.result["running_averages"] = json_array(running_average(series));
    return out;
  }

  if (task == "steady_state") {
    reject_unknown_fields(problem, {"task", "values", "dt", "zeta", "epsilon", "window"},
                          "steady_state problem");
    const ObservableSeries series(
        array_value(require_field(problem, "values", "steady_state problem"),
                    "steady_state problem.values"),
        number_field_or(problem, "dt", 1.0, "steady_state problem"));
    SteadyStateSpec spec;
    spec.zeta = number_field(problem, "zeta", "steady_state problem");
    spec.epsilon = number_field(problem, "epsilon", "steady_state problem");
    spec.window = static_cast<Eigen::Index>(
        integer_value(require_field(problem, "window", "steady_state problem"),
                      "steady_state problem.window"));
    out.result["task"] = task;
    out.result["steady"] = epsilon_steady_state(series, spec);
    out.result["zeta"] = spec.zeta;
    out.result["epsilon"] = spec.epsilon;
    out.result["window"] = static_cast<std::int64_t>(spec.window);
    return out;
  }

  if (task == "wiener_krein") {
    reject_unknown_fields(problem, {"task", "grid", "density", "truncations", "gap_threshold"},
                          "wiener_krein problem");
    const SpectralDensity density(
        array_value(require_field(problem, "grid", "wiener_krein problem"),
                    "wiener_krein problem.grid"),
        array_value(require_field(problem, "density", "wiener_krein problem"),
                    "wiener_krein problem.density"));
    const Eigen::ArrayXd ladder =
        problem.contains("truncations")
            ? array_value(problem["truncations"], "wiener_krein problem.truncations")
            : default_truncation_ladder();
    const double gap_threshold =
        number_field_or(problem, "gap_threshold", 1e-3, "wiener_krein problem");

    const WienerKreinReport report =
        wiener_krein_integral(density, ladder, gap_threshold);
    out.result["task"] = task;
    out.result["verdict"] = report.regular ? "regular" : "divergent";
    out.result["reason"] = report.reason;
    out.result["truncations"] = json_array(report.truncations);
    out.result["integrals"] = json_array(report.integrals);
    if (report.cauchy_gap) out.result["cauchy_gap"] = *report.cauchy_gap;
    out.result["gap_threshold"] = report.gap_threshold;
    return out;
  }

  if (task == "phase_volume") {
    reject_unknown_fields(problem, {"task", "jacobian_determinants"},
                          "phase_volume problem");
    const Eigen::ArrayXd dets = array_value(
        require_field(problem, "jacobian_determinants", "phase_volume problem"),
        "phase_volume problem.jacobian_determinants");
    const double rate = phase_volume_rate(dets);
    out.result["task"] = task;
    out.result["rate"] = rate;
    out.result["contracting"] = rate < 0.0;
    return out;
  }

  throw config_error("unknown_task",
                     "unknown ergodic task '" + task +
                         "'; known: birkhoff, time_average, steady_state, "
                         "wiener_krein, phase_volume");
}

CommandOutput evaluate_once(Command command, const ordered_json& problem,
                            double kappa, const Tolerances& tols) {
  switch (command) {
    case Command::eval:
      return handle_eval(problem, kappa);
    case Command::solve:
      return handle_solve(problem, kappa, tols);
    case Command::entropy:
      return handle_entropy(problem, kappa);
    case Command::stability:
      return handle_stability(problem, kappa);
    case Command::thermo:
      return handle_thermo(problem);
    case Command::ergodic:
      return handle_ergodic(problem);
  }
  throw config_error("unknown command");
}

// ------------------------------------------------------------ reports

ordered_json normalize_problem(Command command, const ordered_json& problem) {
  if (!problem.is_object())
    throw error("parse_error", "input document must be a JSON object");
  if (command != Command::solve || !problem.contains("energies_file"))
    return problem;
  if (problem.contains("energies"))
    throw config_error("invalid_config",
                       "solve problem must not carry both energies and energies_file");
  ordered_json normalized = ordered_json::object();
  for (const auto& item : problem.items()) {
    if (item.key() == "energies_file") {
      const std::string path =
          string_value(item.value(), "solve problem.energies_file");
      const EnsembleFile file = parse_ensemble_csv(read_text_file(path));
      if (file.probabilities)
        throw error("parse_error",
                    "energies_file must use the single-column 'energy' header");
      normalized["energies"] = json_array(file.energies);
    } else {
      normalized[item.key()] = item.value();
    }
  }
  return normalized;
}

int exit_code_for(const kgen::error& e) {
  if (dynamic_cast<const infeasible_error*>(&e) != nullptr ||
      dynamic_cast<const convergence_error*>(&e) != nullptr ||
      dynamic_cast<const overflow_error*>(&e) != nullptr)
    return 1;
  return 2;
}

ordered_json error_block(const kgen::error& e) {
  ordered_json block;
  block["code"] = e.code();
  block["message"] = e.what();
  if (const auto* diverged = dynamic_cast<const convergence_error*>(&e))
    block["last_residual"] = diverged->last_residual();
  return block;
}

std::string compact(const ordered_json& value) {
  if (value.is_array() && value.size() > 8)
    return "[" + std::to_string(value.size()) + " values]";
  return value.dump();
}

std::string render_summary(const ordered_json& report) {
  std::ostringstream out;
  if (report.contains("error")) {
    const auto& err = report["error"];
    out << "error (" << err["code"].get<std::string>()
        << "): " << err["message"].get<std::string>() << "\n";
    return out.str();
  }
  out << "command: " << report["input_echo"]["command"].get<std::string>() << "\n";
  for (const auto& item : report["result"].items())
    out << item.key() << " = " << compact(item.value()) << "\n";
  for (const auto& item : report["diagnostics"].items())
    out << "# " << item.key() << " = " << compact(item.value()) << "\n";
  return out.str();
}

std::string render(const RunConfig& config, const ordered_json& report) {
  if (config.format == Format::summary) return render_summary(report);
  return report.dump(2) + "\n";
}

RunResult error_result(const RunConfig& config, int exit_code,
                       const ordered_json& block, const ordered_json* problem) {
  RunResult result;
  result.exit_code = exit_code;
  result.report["error"] = block;
  if (problem != nullptr) {
    ordered_json echo;
    echo["command"] = command_name(config.command);
    echo["problem"] = *problem;
    result.report["input_echo"] = echo;
  }
  result.rendered = render(config, result.report);
  return result;
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "eval") return Command::eval;
  if (name == "solve") return Command::solve;
  if (name == "entropy") return Command::entropy;
  if (name == "stability") return Command::stability;
  if (name == "thermo") return Command::thermo;
  if (name == "ergodic") return Command::ergodic;
  throw config_error("unknown_command",
                     "unknown command '" + name +
                         "'; known: eval, solve, entropy, stability, thermo, ergodic");
}

std::string command_name(Command command) {
  switch (command) {
    case Command::eval:
      return "eval";
    case Command::solve:
      return "solve";
    case Command::entropy:
      return "entropy";
    case Command::stability:
      return "stability";
    case Command::thermo:
      return "thermo";
    case Command::ergodic:
      return "ergodic";
  }
  return "unknown";
}

RunResult run_on_document(const RunConfig& config, const ordered_json& problem) {
  try {
    const Tolerances tols = resolve_tolerances(config);
    const ordered_json normalized = normalize_problem(config.command, problem);

    if (!command_uses_kappa(config.command) &&
        (config.kappa || !config.kappa_sweep.empty()))
      throw config_error("kappa_not_applicable",
                         "--kappa/--kappa-sweep do not apply to the " +
                             command_name(config.command) + " command");
    if (config.kappa) validate_kappa(*config.kappa);

    std::vector<double> sweep = config.kappa_sweep;
    std::sort(sweep.begin(), sweep.end());
    for (double k : sweep) validate_kappa(k);

    ordered_json result, diagnostics;
    if (!sweep.empty()) {
      result["sweep"] = ordered_json::array();
      diagnostics["sweep"] = ordered_json::array();
      for (double k : sweep) {
        CommandOutput out = evaluate_once(config.command, normalized, k, tols);
        result["sweep"].push_back(out.result);
        ordered_json diag_entry;
        diag_entry["kappa"] = k;
        diag_entry.update(out.diagnostics);
        diagnostics["sweep"].push_back(diag_entry);
      }
    } else {
      const double kappa = command_uses_kappa(config.command)
                               ? resolve_single_kappa(config, normalized)
                               : 0.0;
      if (command_uses_kappa(config.command)) validate_kappa(kappa);
      CommandOutput out = evaluate_once(config.command, normalized, kappa, tols);
      result = out.result;
      diagnostics = out.diagnostics;
    }

    ordered_json report;
    ordered_json echo;
    echo["command"] = command_name(config.command);
    ordered_json options;
    options["format"] = config.format == Format::summary ? "summary" : "report";
    if (config.kappa) options["kappa"] = *config.kappa;
    if (!sweep.empty()) options["kappa_sweep"] = sweep;
    options["tolerance_profile"] = tols.profile;
    options["tolerance"] = tols.tolerance;
    options["max_iterations"] = tols.max_iterations;
    echo["options"] = options;
    echo["problem"] = normalized;
    report["input_echo"] = echo;
    report["result"] = result;
    report["diagnostics"] = diagnostics;
    ordered_json provenance;
    provenance["artifact"] = std::string(kArtifactName);
    provenance["version"] = std::string(kVersion);
    ordered_json tolerances;
    tolerances["profile"] = tols.profile;
    tolerances["tolerance"] = tols.tolerance;
    tolerances["max_iterations"] = tols.max_iterations;
    provenance["tolerances"] = tolerances;
    report["provenance"] = provenance;

    RunResult run_result;
    run_result.exit_code = 0;
    run_result.report = report;
    run_result.rendered = render(config, report);
    return run_result;
  } catch (const kgen::error& e) {
    return error_result(config, exit_code_for(e), error_block(e), &problem);
  } catch (const nlohmann::json::exception& e) {
    ordered_json block;
    block["code"] = "parse_error";
    block["message"] = e.what();
    return error_result(config, 2, block, &problem);
  }
}

RunResult run(const RunConfig& config) {
  try {
    const std::string text = read_text_file(config.input_path);
    ordered_json problem;
    const bool csv_command =
        config.command == Command::entropy || config.command == Command::stability;
    const std::size_t first =
        text.find_first_not_of(" \t\r\n");
    const bool looks_like_json = first != std::string::npos && text[first] == '{';
    if (csv_command && !looks_like_json) {
      const EnsembleFile file = parse_ensemble_csv(text);
      if (!file.probabilities)
        throw error("parse_error",
                    "the " + command_name(config.command) +
                        " command needs the two-column 'energy,probability' format");
      problem["energies"] = json_array(file.energies);
      problem["probabilities"] = json_array(*file.probabilities);
    } else {
      problem = ordered_json::parse(text);
    }
    return run_on_document(config, problem);
  } catch (const nlohmann::json::exception& e) {
    ordered_json block;
    block["code"] = "parse_error";
    block["message"] = e.what();
    return error_result(config, 2, block, nullptr);
  } catch (const kgen::error& e) {
    return error_result(config, exit_code_for(e), error_block(e), nullptr);
  }
}

RunConfig config_from_echo(const ordered_json& input_echo) {
  RunConfig config;
  config.command = parse_command(
      string_value(require_field(input_echo, "command", "input_echo"),
                   "input_echo.command"));
  const ordered_json& options = require_field(input_echo, "options", "input_echo");
  if (options.contains("kappa"))
    config.kappa = number_value(options["kappa"], "input_echo.options.kappa");
  if (options.contains("kappa_sweep")) {
    for (const auto& value : options["kappa_sweep"])
      config.kappa_sweep.push_back(
          number_value(value, "input_echo.options.kappa_sweep entries"));
  }
  config.tolerance =
      number_value(require_field(options, "tolerance", "input_echo.options"),
                   "input_echo.options.tolerance");
  config.max_iterations = static_cast<int>(integer_value(
      require_field(options, "max_iterations", "input_echo.options"),
      "input_echo.options.max_iterations"));
  config.format = string_value(require_field(options, "format", "input_echo.options"),
                               "input_echo.options.format") == "summary"
                      ? Format::summary
                      : Format::report;
  return config;
}

}  // namespace kgen::cli
