#pragma once

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "kgen/errors.hpp"

namespace kgen {

/// Deformation parameter of the kappa-exponential family. kappa = 0 is the
/// classical Boltzmann-Gibbs limit and dispatches to exp/log directly, not to
/// a limit approximation. The bound |kappa| < 1 keeps p * ln_k(p) -> 0 as
/// p -> 0, which the entropy sums rely on.
template <typename Scalar = double>
class KappaParam {
 public:
  explicit KappaParam(Scalar kappa) : kappa_(kappa) {
    if (!std::isfinite(kappa))
      throw domain_error("invalid_kappa", "kappa must be finite");
    if (!(std::abs(kappa) < Scalar(1)))
      throw domain_error("invalid_kappa",
                         "|kappa| must be < 1, got " + std::to_string(kappa));
  }

  Scalar value() const noexcept { return kappa_; }
  bool classical() const noexcept { return kappa_ == Scalar(0); }

 private:
  Scalar kappa_;
};

namespace detail {

// Below this magnitude of kappa*tau (resp. kappa*ln x) the series expansion
// of asinh(u)/kappa (resp. sinh(v)/kappa) is used. The direct power forms
// lose all significant digits near kappa = 0; the series keeps the error at
// the 1e-24 level at the branch point.
inline constexpr double kSeriesThreshold = 1e-4;

}  // namespace detail

/// Logarithm of the deformed exponential: asinh(kappa*tau)/kappa, with a
/// series branch near kappa*tau = 0. Useful on its own whenever exp_k would
/// over- or underflow (the ensemble solver works in this log space).
template <typename Scalar>
Scalar kappa_exponent(Scalar tau, KappaParam<Scalar> kappa) {
  const Scalar k = kappa.value();
  if (k == Scalar(0)) return tau;
  const Scalar u = k * tau;
  if (std::abs(u) < Scalar(detail::kSeriesThreshold)) {
    const Scalar u2 = u * u;
    return tau * (Scalar(1) - u2 / Scalar(6) + Scalar(3) * u2 * u2 / Scalar(40));
  }
  return std::asinh(u) / k;
}

/// Deformed exponential: (kappa*tau + sqrt(1 + kappa^2 tau^2))^(1/kappa) for
/// kappa != 0, exp(tau) at kappa = 0. Evaluated as exp(asinh(kappa*tau)/kappa)
/// so the kappa -> 0 limit is uniform. Strictly increasing in tau. Overflow
/// raises; extreme negative tau saturates to 0 like exp itself.
template <typename Scalar>
Scalar kappa_exp(Scalar tau, KappaParam<Scalar> kappa) {
  if (!std::isfinite(tau)) throw domain_error("kappa_exp requires finite tau");
  const Scalar result = std::exp(kappa_exponent(tau, kappa));
  if (std::isinf(result))
    throw overflow_error("kappa_exp overflows the double range at tau = " +
                         std::to_string(tau) + ", kappa = " +
                         std::to_string(kappa.value()));
  return result;
}

/// Deformed logarithm: (x^kappa - x^(-kappa))/(2 kappa) for kappa != 0,
/// ln(x) at kappa = 0. Evaluated as sinh(kappa * ln x)/kappa; exactly even in
/// kappa and odd under x <-> 1/x at the formula level.
template <typename Scalar>
Scalar kappa_log(Scalar x, KappaParam<Scalar> kappa) {
  if (!(x > Scalar(0)) || !std::isfinite(x))
    throw domain_error("kappa_log requires x > 0, got " + std::to_string(x));
  const Scalar lx = std::log(x);
  const Scalar k = kappa.value();
  if (k == Scalar(0)) return lx;
  const Scalar v = k * lx;
  if (std::abs(v) < Scalar(detail::kSeriesThreshold)) {
    const Scalar v2 = v * v;
    return lx * (Scalar(1) + v2 / Scalar(6) + v2 * v2 / Scalar(120));
  }
  const Scalar result = std::sinh(v) / k;
  if (std::isinf(result))
    throw overflow_error("kappa_log overflows the double range at x = " +
                         std::to_string(x));
  return result;
}

/// First derivative of the deformed logarithm,
/// (kappa/p) ln_k(p) + p^(-(kappa+1)) = (p^(kappa-1) + p^(-kappa-1))/2,
/// evaluated as cosh(kappa * ln p)/p. Always positive; 1/p at kappa = 0.
template <typename Scalar>
Scalar kappa_log_deriv(Scalar p, KappaParam<Scalar> kappa) {
  if (!(p > Scalar(0)) || !std::isfinite(p))
    throw domain_error("kappa_log_deriv requires p > 0, got " + std::to_string(p));
  const Scalar k = kappa.value();
  if (k == Scalar(0)) return Scalar(1) / p;
  const Scalar result = std::cosh(k * std::log(p)) / p;
  if (std::isinf(result))
    throw overflow_error("kappa_log_deriv overflows the double range at p = " +
                         std::to_string(p));
  return result;
}

// Elementwise variants. Inputs may be any array expression; results are
// evaluated eagerly.

template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> kappa_exp(
    const Eigen::ArrayBase<Derived>& tau, KappaParam<typename Derived::Scalar> kappa) {
  using Scalar = typename Derived::Scalar;
  return tau.derived().unaryExpr(
      [kappa](Scalar t) { return kappa_exp<Scalar>(t, kappa); });
}

template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> kappa_log(
    const Eigen::ArrayBase<Derived>& x, KappaParam<typename Derived::Scalar> kappa) {
  using Scalar = typename Derived::Scalar;
  return x.derived().unaryExpr(
      [kappa](Scalar v) { return kappa_log<Scalar>(v, kappa); });
}

template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> kappa_log_deriv(
    const Eigen::ArrayBase<Derived>& p, KappaParam<typename Derived::Scalar> kappa) {
  using Scalar = typename Derived::Scalar;
  return p.derived().unaryExpr(
      [kappa](Scalar v) { return kappa_log_deriv<Scalar>(v, kappa); });
}

}  // namespace kgen
