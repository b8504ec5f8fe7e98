#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "kgen/errors.hpp"
#include "kgen/kappa.hpp"

namespace kgen {

/// Discrete set of paths with per-path energies E and probabilities p.
/// Construction enforces equal lengths, finite energies, p in [0, 1] and
/// sum(p) = 1 to within kNormTolerance.
class PathEnsemble {
 public:
  static constexpr double kNormTolerance = 1e-10;

  PathEnsemble(Eigen::ArrayXd energies, Eigen::ArrayXd probabilities)
      : energies_(std::move(energies)), probabilities_(std::move(probabilities)) {
    if (energies_.size() < 1 || energies_.size() != probabilities_.size())
      throw domain_error("energies and probabilities must have equal nonzero length");
    if (!energies_.isFinite().all())
      throw domain_error("path energies must be finite");
    if (!probabilities_.isFinite().all() || (probabilities_ < 0.0).any() ||
        (probabilities_ > 1.0).any())
      throw domain_error("path probabilities must lie in [0, 1]");
    const double total = probabilities_.sum();
    if (std::abs(total - 1.0) > kNormTolerance)
      throw domain_error("path probabilities must sum to 1 within 1e-10, got " +
                         std::to_string(total));
  }

  const Eigen::ArrayXd& energies() const noexcept { return energies_; }
  const Eigen::ArrayXd& probabilities() const noexcept { return probabilities_; }
  Eigen::Index size() const noexcept { return energies_.size(); }

 private:
  Eigen::ArrayXd energies_;
  Eigen::ArrayXd probabilities_;
};

/// Inputs of one constrained ensemble solve: the spectrum, the target mean
/// energy, and the deformation parameter. temperature and lambda are carried
/// for the multiplier reporting convention only; reduced units put k_B = 1
/// and default lambda to 2 k_B.
struct EnsembleProblem {
  Eigen::ArrayXd energies;
  double target_energy = 0.0;
  KappaParam<double> kappa{0.0};
  double temperature = 1.0;
  double lambda = 2.0;
};

enum class SolveMethod { newton, bisection };

/// Solver output. The probabilities reproduce
///   p_i = alpha * exp_k(-beta * (E_i - mu)),   mu = min energy,
/// exactly, since they are constructed from that formula. The conventional
/// multipliers follow from the identification beta = 1/(lambda*T), mu = E_ref.
struct EnsembleSolution {
  PathEnsemble ensemble;
  double alpha = 0.0;
  double beta = 0.0;
  double mu = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  SolveMethod method = SolveMethod::newton;
};

/// p = alpha * exp_k(-beta * (E - E_ref)). Positive; decreasing in E for
/// beta > 0.
inline double path_probability(double energy, double alpha, double beta,
                               double energy_ref, KappaParam<double> kappa) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw domain_error("path_probability requires alpha > 0");
  if (!std::isfinite(energy) || !std::isfinite(beta) || !std::isfinite(energy_ref))
    throw domain_error("path_probability requires finite energy, beta, E_ref");
  return alpha * kappa_exp(-beta * (energy - energy_ref), kappa);
}

/// Expectation value sum(p_i * E_i) of the path energy.
inline double mean_energy(const PathEnsemble& ensemble) {
  return (ensemble.probabilities() * ensemble.energies()).sum();
}

/// Per-path endpoint data entering the normalization constant alpha. Arrays
/// are indexed by path; horizon tau and k_B are shared across the list.
struct PathEndpointData {
  Eigen::ArrayXd endpoint_hamiltonian;  // h_g: volume-integrated endpoint Hamiltonians, dimensionless
  Eigen::ArrayXd entropy_production;    // sigma_g: time-averaged entropy production rate
  double horizon = 1.0;                 // tau
  double k_boltzmann = 1.0;
};

/// alpha = [ sum_g exp(-h_g/2 + tau*sigma_g/(2 k_B)) ]^(-1).
///
/// Exponent grouping: the two terms are -(1/2) h_g and +tau*sigma_g/(2 k_B);
/// this is the single place that fixes the grouping.
inline double alpha_from_path_data(const PathEndpointData& data) {
  const Eigen::Index n = data.endpoint_hamiltonian.size();
  if (n == 0) throw domain_error("alpha_from_path_data requires at least one path");
  if (data.entropy_production.size() != n)
    throw domain_error("endpoint_hamiltonian and entropy_production lengths differ");
  if (!data.endpoint_hamiltonian.isFinite().all() ||
      !data.entropy_production.isFinite().all())
    throw domain_error("path endpoint data must be finite");
  if (!(data.horizon > 0.0) || !std::isfinite(data.horizon))
    throw domain_error("horizon tau must be > 0");
  if (!(data.k_boltzmann > 0.0) || !std::isfinite(data.k_boltzmann))
    throw domain_error("k_boltzmann must be > 0");

  const Eigen::ArrayXd exponent =
      -0.5 * data.endpoint_hamiltonian +
      (data.horizon / (2.0 * data.k_boltzmann)) * data.entropy_production;
  const double total = exponent.exp().sum();
  const double alpha = 1.0 / total;
  if (!std::isfinite(total) || !std::isfinite(alpha))
    throw overflow_error("path-data normalization sum exceeds the double range");
  return alpha;
}

/// Open interval of mean energies the solver family can reach for this
/// spectrum and kappa. The classical exponential concentrates all mass on the
/// top level as beta -> -inf, so at kappa = 0 the interval is
/// (E_min, E_max). For kappa != 0 the deformed exponential has power-law
/// tails: the beta -> -inf weights saturate at d_i^(1/|kappa|) with
/// d_i = E_i - E_min, and the supremum
///   sup = sum_i E_i d_i^(1/|kappa|) / sum_i d_i^(1/|kappa|)   (d_i > 0)
/// sits strictly below E_max whenever more than one level lies above the
/// minimum.
inline std::pair<double, double> attainable_energy_range(
    const Eigen::ArrayXd& energies, KappaParam<double> kappa) {
  if (energies.size() < 1) throw domain_error("ensemble needs at least one energy");
  if (!energies.isFinite().all()) throw domain_error("energies must be finite");
  const double e_min = energies.minCoeff();
  const double e_max = energies.maxCoeff();
  if (kappa.classical() || e_max == e_min) return {e_min, e_max};

  const double power = 1.0 / std::abs(kappa.value());
  double peak = -std::numeric_limits<double>::infinity();
  Eigen::ArrayXd log_w(energies.size());
  for (Eigen::Index i = 0; i < energies.size(); ++i) {
    const double gap = energies[i] - e_min;
    log_w[i] = gap > 0.0 ? power * std::log(gap)
                         : -std::numeric_limits<double>::infinity();
    peak = std::max(peak, log_w[i]);
  }
  double total = 0.0, weighted = 0.0;
  for (Eigen::Index i = 0; i < energies.size(); ++i) {
    const double w = std::exp(log_w[i] - peak);
    total += w;
    weighted += w * energies[i];
  }
  return {e_min, weighted / total};
}

namespace detail {

// Normalization and mean energy of the weights w_i = exp_k(-beta * d_i),
// evaluated through log-sum-exp so large |beta| cannot overflow.
struct WeightStats {
  double log_norm = 0.0;     // log sum_i w_i
  double mean_energy = 0.0;  // sum_i E_i w_i / sum_i w_i
};

inline WeightStats weight_stats(const Eigen::ArrayXd& energies,
                                const Eigen::ArrayXd& shifted, double beta,
                                KappaParam<double> kappa) {
  Eigen::ArrayXd log_w(shifted.size());
  for (Eigen::Index i = 0; i < shifted.size(); ++i)
    log_w[i] = kappa_exponent(-beta * shifted[i], kappa);
  const double peak = log_w.maxCoeff();
  const Eigen::ArrayXd scaled = (log_w - peak).exp();
  const double total = scaled.sum();
  WeightStats stats;
  stats.log_norm = peak + std::log(total);
  stats.mean_energy = (scaled * energies).sum() / total;
  return stats;
}

}  // namespace detail

/// Finds (alpha, beta) such that p_i = alpha * exp_k(-beta*(E_i - E_min))
/// satisfies sum(p) = 1 and sum(p E) = U. Damped Newton on the two residuals
/// with a finite-difference Jacobian; if Newton stalls, falls back to
/// bisection on beta with alpha eliminated by normalization (the constrained
/// mean is strictly decreasing in beta, so the bracket always closes).
inline EnsembleSolution solve_ensemble(const EnsembleProblem& problem,
                                       double tol = 1e-10, int max_iter = 200) {
  const Eigen::ArrayXd& energies = problem.energies;
  const double target = problem.target_energy;
  const KappaParam<double> kappa = problem.kappa;

  if (energies.size() < 1) throw domain_error("ensemble needs at least one energy");
  if (!energies.isFinite().all()) throw domain_error("energies must be finite");
  if (!std::isfinite(target)) throw domain_error("target energy must be finite");
  if (!(problem.temperature > 0.0) || !std::isfinite(problem.temperature))
    throw domain_error("temperature must be > 0");
  if (!(problem.lambda > 0.0) || !std::isfinite(problem.lambda))
    throw domain_error("lambda must be > 0");
  if (!(tol > 0.0)) throw domain_error("tol must be > 0");
  if (max_iter < 1) throw domain_error("max_iter must be >= 1");

  const double e_min = energies.minCoeff();
  const double e_max = energies.maxCoeff();
  const double u_scale = std::max(1.0, std::abs(target));
  const Eigen::Index n = energies.size();

  auto build_solution = [&](double alpha, double beta, int iterations,
                            SolveMethod method) {
    Eigen::ArrayXd p(n);
    for (Eigen::Index i = 0; i < n; ++i)
      p[i] = alpha * kappa_exp(-beta * (energies[i] - e_min), kappa);
    const double energy_residual = (p * energies).sum() - target;
    const double norm_residual = p.sum() - 1.0;
    const double residual =
        std::max(std::abs(norm_residual), std::abs(energy_residual) / u_scale);
    EnsembleSolution solution{PathEnsemble(energies, p),
                              alpha,
                              beta,
                              e_min,
                              residual,
                              iterations,
                              residual <= tol,
                              method};
    return solution;
  };

  // Degenerate spectrum: the only attainable mean is the common energy.
  if (e_max == e_min) {
    if (std::abs(target - e_min) > tol * u_scale)
      throw infeasible_error(
          "degenerate spectrum: every path has energy " + std::to_string(e_min) +
          ", the only attainable target energy; got " + std::to_string(target));
    return build_solution(1.0 / static_cast<double>(n), 0.0, 0, SolveMethod::newton);
  }

  const auto [attainable_lo, attainable_hi] =
      attainable_energy_range(energies, kappa);
  if (!(target > attainable_lo && target < attainable_hi))
    throw infeasible_error("target energy " + std::to_string(target) +
                           " lies outside the attainable open interval (" +
                           std::to_string(attainable_lo) + ", " +
                           std::to_string(attainable_hi) + ")");

  const Eigen::ArrayXd shifted = energies - e_min;

  auto residuals = [&](double alpha, double beta) {
    const detail::WeightStats stats =
        detail::weight_stats(energies, shifted, beta, kappa);
    const double total = std::exp(std::log(alpha) + stats.log_norm);
    return Eigen::Vector2d(total - 1.0, total * stats.mean_energy - target);
  };
  auto scaled_norm = [&](const Eigen::Vector2d& r) {
    return std::max(std::abs(r[0]), std::abs(r[1]) / u_scale);
  };

  // Initial guess: classical two-point fit on the spectrum ends. Symmetric
  // spectra with U at the arithmetic mean land on beta = 0 exactly.
  const double span = e_max - e_min;
  const double low_weight = (e_max - target) / span;
  double beta = std::log(low_weight / (1.0 - low_weight)) / span;
  double alpha =
      std::exp(-detail::weight_stats(energies, shifted, beta, kappa).log_norm);

  int iterations = 0;
  const int newton_budget = std::min(max_iter, 60);
  Eigen::Vector2d r = residuals(alpha, beta);

  while (iterations < newton_budget && scaled_norm(r) > tol) {
    constexpr double sqrt_eps = 1.4901161193847656e-8;
    const double h_alpha = sqrt_eps * std::max(std::abs(alpha), 1e-12);
    const double h_beta = sqrt_eps * std::max(std::abs(beta), 1.0);
    Eigen::Matrix2d jac;
    jac.col(0) = (residuals(alpha + h_alpha, beta) - r) / h_alpha;
    jac.col(1) = (residuals(alpha, beta + h_beta) - r) / h_beta;
    const Eigen::Vector2d step = jac.fullPivLu().solve(-r);
    ++iterations;
    if (!step.allFinite()) break;  // singular Jacobian: hand over to bisection
    bool accepted = false;
    double damping = 1.0;
    const double base = scaled_norm(r);
    for (int halvings = 0; halvings < 40 && !accepted; ++halvings, damping *= 0.5) {
      const double next_alpha = alpha + damping * step[0];
      const double next_beta = beta + damping * step[1];
      if (!(next_alpha > 0.0)) continue;
      const Eigen::Vector2d next_r = residuals(next_alpha, next_beta);
      if (next_r.allFinite() && scaled_norm(next_r) < base) {
        alpha = next_alpha;
        beta = next_beta;
        r = next_r;
        accepted = true;
      }
    }
    if (!accepted) break;  // no descent even fully damped
  }

  if (scaled_norm(r) <= tol)
    return build_solution(alpha, beta, iterations, SolveMethod::newton);

  // Bisection fallback on beta; alpha is eliminated by normalization, so the
  // single residual is the normalized mean energy minus the target.
  auto excess = [&](double b) {
    return detail::weight_stats(energies, shifted, b, kappa).mean_energy - target;
  };

  double lo = beta, hi = beta;
  double f_lo = excess(lo), f_hi = f_lo;
  double step_out = std::max(1.0, std::abs(beta));
  int guard = 0;
  if (f_lo >= 0.0) {
    // mean still above target: move beta upward until the sign flips
    hi = lo + step_out;
    f_hi = excess(hi);
    while (f_hi > 0.0 && guard++ < 120) {
      lo = hi;
      f_lo = f_hi;
      step_out *= 2.0;
      hi += step_out;
      f_hi = excess(hi);
    }
  } else {
    lo = hi - step_out;
    f_lo = excess(lo);
    while (f_lo < 0.0 && guard++ < 120) {
      hi = lo;
      f_hi = f_lo;
      step_out *= 2.0;
      lo -= step_out;
      f_lo = excess(lo);
    }
  }
  if (!(f_lo >= 0.0 && f_hi <= 0.0))
    throw convergence_error("failed to bracket the energy constraint in beta",
                            scaled_norm(r));

  double mid = 0.5 * (lo + hi);
  double f_mid = excess(mid);
  while (iterations < max_iter) {
    ++iterations;
    mid = 0.5 * (lo + hi);
    f_mid = excess(mid);
    if (std::abs(f_mid) <= tol * u_scale) break;
    if (f_mid > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(mid)))
      break;
  }
  if (std::abs(f_mid) > tol * u_scale)
    throw convergence_error(
        "ensemble solve did not reach tolerance within max_iter iterations",
        std::abs(f_mid) / u_scale);

  beta = mid;
  alpha = std::exp(-detail::weight_stats(energies, shifted, beta, kappa).log_norm);
  return build_solution(alpha, beta, iterations, SolveMethod::bisection);
}

}  // namespace kgen
