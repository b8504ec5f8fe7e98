#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace kgen {

/// Base class for all library errors. `code()` is the stable machine-readable
/// identifier surfaced in CLI reports and used for exit-status mapping.
class error : public std::runtime_error {
 public:
  error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// An argument lies outside an operation's domain (CLI exit 2).
class domain_error : public error {
 public:
  using error::error;
  explicit domain_error(const std::string& message) : error("invalid_value", message) {}
};

/// A result exceeds the representable double range (CLI exit 1).
class overflow_error : public error {
 public:
  explicit overflow_error(const std::string& message) : error("overflow", message) {}
};

/// The constraint target cannot be met by any admissible solution (CLI exit 1).
class infeasible_error : public error {
 public:
  explicit infeasible_error(const std::string& message)
      : error("infeasible_target_energy", message) {}
};

/// The iteration budget ran out before the tolerance was met (CLI exit 1).
class convergence_error : public error {
 public:
  convergence_error(const std::string& message, double last_residual)
      : error("solver_divergence", message), last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

/// A run configuration problem: unknown names, missing fields (CLI exit 2).
class config_error : public error {
 public:
  using error::error;
  explicit config_error(const std::string& message) : error("invalid_config", message) {}
};

}  // namespace kgen
