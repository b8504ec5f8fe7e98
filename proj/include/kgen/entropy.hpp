#pragma once

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "kgen/ensemble.hpp"
#include "kgen/errors.hpp"
#include "kgen/kappa.hpp"

namespace kgen {

/// Macroscopic process data for entropy generation. Symbols follow the usual
/// engineering balance: heat Q_r drawn from a source at T_r, ambient T_a,
/// enthalpy/entropy/kinetic/gravitational changes, work W, and the
/// lower-reservoir reference temperature T_ref.
struct ThermoState {
  double Q_r = 0.0;    // heat from the source [J]
  double T_r = 0.0;    // source temperature [K]
  double T_a = 0.0;    // ambient temperature [K]
  double dH = 0.0;     // enthalpy change [J]
  double dS = 0.0;     // entropy change [J/K]
  double dEk = 0.0;    // kinetic energy change [J]
  double dEg = 0.0;    // gravitational energy change [J]
  double W = 0.0;      // work [J]
  double T_ref = 0.0;  // reference (lower reservoir) temperature [K]
};

namespace detail {

inline void validate(const ThermoState& s) {
  if (!(s.T_r > 0.0) || !(s.T_a > 0.0) || !(s.T_ref > 0.0))
    throw domain_error("temperatures T_r, T_a, T_ref must be > 0");
  for (double v : {s.Q_r, s.T_r, s.T_a, s.dH, s.dS, s.dEk, s.dEg, s.W, s.T_ref})
    if (!std::isfinite(v)) throw domain_error("thermo state fields must be finite");
}

}  // namespace detail

/// Entropy generation [J/K]:
///   S_g = Q_r/T_a (1 - T_a/T_r) + dH/T_a - dS + (dEk + dEg - W)/T_a.
inline double thermo_entropy_generation(const ThermoState& s) {
  detail::validate(s);
  return s.Q_r / s.T_a * (1.0 - s.T_a / s.T_r) + s.dH / s.T_a - s.dS +
         (s.dEk + s.dEg - s.W) / s.T_a;
}

/// Work lost to irreversibility, W_lost = T_ref * S_g [J].
inline double lost_work(const ThermoState& s) {
  return s.T_ref * thermo_entropy_generation(s);
}

/// L = -T_ref * S_g. Non-positive whenever S_g >= 0.
inline double thermodynamic_lagrangian(double entropy_generation, double t_ref) {
  if (!(t_ref > 0.0) || !std::isfinite(t_ref))
    throw domain_error("reference temperature must be > 0");
  if (!std::isfinite(entropy_generation))
    throw domain_error("entropy generation must be finite");
  return -t_ref * entropy_generation;
}

/// Statistical entropy generation -sum_i p_i ln_k(p_i), with the convention
/// 0 * ln_k(0) := 0 (valid for |kappa| < 1). Non-negative for probability
/// vectors; Shannon entropy at kappa = 0.
template <typename Derived>
double kappa_entropy(const Eigen::ArrayBase<Derived>& probabilities,
                     KappaParam<double> kappa) {
  const auto& p = probabilities.derived();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double pi = p[i];
    if (!(pi >= 0.0) || !(pi <= 1.0))
      throw domain_error("probabilities must lie in [0, 1], got " +
                         std::to_string(pi));
    if (pi > 0.0) acc += pi * kappa_log(pi, kappa);
  }
  return -acc;
}

inline double kappa_entropy(const PathEnsemble& ensemble, KappaParam<double> kappa) {
  return kappa_entropy(ensemble.probabilities(), kappa);
}

/// Term-by-term derivative of the entropy sum from the stability analysis:
///   S_g' = -sum_i (1 + kappa) ln_k(p_i) - sum_i p_i^(-kappa).
/// Every p_i must be strictly positive: p^(-kappa) diverges at 0.
template <typename Derived>
double entropy_derivative(const Eigen::ArrayBase<Derived>& probabilities,
                          KappaParam<double> kappa) {
  const auto& p = probabilities.derived();
  if (p.size() == 0) throw domain_error("entropy_derivative needs at least one path");
  const double k = kappa.value();
  double sum_log = 0.0, sum_pow = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double pi = p[i];
    if (!(pi > 0.0) || !std::isfinite(pi))
      throw domain_error("entropy_derivative requires every p > 0");
    sum_log += kappa_log(pi, kappa);
    sum_pow += std::pow(pi, -k);
  }
  return -(1.0 + k) * sum_log - sum_pow;
}

inline double entropy_derivative(const PathEnsemble& ensemble, KappaParam<double> kappa) {
  return entropy_derivative(ensemble.probabilities(), kappa);
}

/// Stability verdict for a steady state. ratio is
/// (-sum_i ln_k p_i) / (sum_i p_i^(-kappa)); the state is deemed stable when
/// ratio >= 1/(1+kappa). entropy_derivative is the same criterion in its
/// S_g' >= 0 form; `consistent` records that the two signs agree.
struct StabilityReport {
  double ratio = 0.0;
  double threshold = 0.0;
  double margin = 0.0;
  bool stable = false;
  double entropy_derivative = 0.0;
  bool consistent = false;
};

template <typename Derived>
StabilityReport stability_ratio(const Eigen::ArrayBase<Derived>& probabilities,
                                KappaParam<double> kappa) {
  const auto& p = probabilities.derived();
  if (p.size() == 0) throw domain_error("stability_ratio needs at least one path");
  const double k = kappa.value();
  double sum_log = 0.0, sum_pow = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double pi = p[i];
    if (!(pi > 0.0) || !std::isfinite(pi))
      throw domain_error("stability_ratio requires every p > 0");
    if (pi > 1.0)
      throw domain_error("stability_ratio requires every p <= 1, got " +
                         std::to_string(pi));
    sum_log += kappa_log(pi, kappa);
    sum_pow += std::pow(pi, -k);
  }
  StabilityReport report;
  report.ratio = -sum_log / sum_pow;
  report.threshold = 1.0 / (1.0 + k);
  report.margin = report.ratio - report.threshold;
  report.stable = report.margin >= 0.0;
  report.entropy_derivative = -(1.0 + k) * sum_log - sum_pow;
  report.consistent = (report.entropy_derivative >= 0.0) == report.stable;
  return report;
}

inline StabilityReport stability_ratio(const PathEnsemble& ensemble,
                                       KappaParam<double> kappa) {
  return stability_ratio(ensemble.probabilities(), kappa);
}

}  // namespace kgen
