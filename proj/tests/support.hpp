#pragma once

// Shared test utilities: fixed-seed generators and the independent oracles
// the property tests compare against. Everything here is deliberately
// implemented from the defining formulas, not through the library under test.

#include <cmath>
#include <random>

#include <Eigen/Core>

namespace testsupport {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

/// Random probability vector with entries bounded away from 0.
inline Eigen::ArrayXd random_distribution(std::mt19937_64& rng, Eigen::Index n,
                                          double floor = 1e-3) {
  std::uniform_real_distribution<double> uniform(floor, 1.0);
  Eigen::ArrayXd p(n);
  for (Eigen::Index i = 0; i < n; ++i) p[i] = uniform(rng);
  return p / p.sum();
}

/// Classical Gibbs solution by bisection on beta: p_i = exp(-beta E_i)/Z with
/// sum(p E) = U. Independent of the ensemble solver's code path.
struct GibbsSolution {
  Eigen::ArrayXd probabilities;
  double beta = 0.0;
};

inline GibbsSolution gibbs_bisection(const Eigen::ArrayXd& energies, double target,
                                     int iterations = 200) {
  const double shift = energies.minCoeff();
  const Eigen::ArrayXd d = energies - shift;
  auto mean_at = [&](double beta) {
    const Eigen::ArrayXd w = (-beta * d).exp();
    return (w * energies).sum() / w.sum();
  };
  double lo = -1.0, hi = 1.0;
  while (mean_at(lo) < target) lo *= 2.0;
  while (mean_at(hi) > target) hi *= 2.0;
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mean_at(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  GibbsSolution solution;
  solution.beta = 0.5 * (lo + hi);
  const Eigen::ArrayXd w = (-solution.beta * d).exp();
  solution.probabilities = w / w.sum();
  return solution;
}

/// Central difference (f(x+h) - f(x-h)) / 2h.
template <typename F>
double central_difference(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double relative_error(double got, double expected) {
  const double scale = std::max(std::abs(expected), 1e-300);
  return std::abs(got - expected) / scale;
}

}  // namespace testsupport
