#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Core>

#include "kgen/errors.hpp"

namespace kgen {

/// Interval maps for the Birkhoff diagnostics. State lives on [0, 1];
/// rotation and doubling act mod 1, affine_contraction contracts into [0, 1].
class MapSpec {
 public:
  enum class Kind { rotation, doubling, affine_contraction };

  static MapSpec rotation(double frequency) {
    if (!std::isfinite(frequency))
      throw domain_error("rotation frequency must be finite");
    MapSpec map;
    map.kind_ = Kind::rotation;
    map.frequency_ = frequency;
    return map;
  }

  static MapSpec doubling() {
    MapSpec map;
    map.kind_ = Kind::doubling;
    return map;
  }

  static MapSpec affine_contraction(double factor, double offset) {
    if (!(factor > 0.0 && factor < 1.0))
      throw domain_error("contraction factor must lie in (0, 1)");
    if (!(offset >= 0.0) || !(factor + offset <= 1.0) || !std::isfinite(offset))
      throw domain_error("offset must keep the affine map inside [0, 1]");
    MapSpec map;
    map.kind_ = Kind::affine_contraction;
    map.factor_ = factor;
    map.offset_ = offset;
    return map;
  }

  Kind kind() const noexcept { return kind_; }
  double frequency() const noexcept { return frequency_; }
  double factor() const noexcept { return factor_; }
  double offset() const noexcept { return offset_; }

 private:
  MapSpec() = default;
  Kind kind_ = Kind::rotation;
  double frequency_ = 0.0;
  double factor_ = 0.5;
  double offset_ = 0.0;
};

namespace detail {

// Doubling in binary floating point collapses to 0 after ~53 steps, so the
// map is iterated as n -> 2n mod M over a large odd prime. 2n stays below
// 2^63 and the multiplicative order of 2 is astronomically larger than any
// desk-scale trajectory.
inline constexpr std::uint64_t kDoublingModulus = 999999999999999989ULL;

inline double wrap_unit(double x) {
  const double f = x - std::floor(x);
  return f < 1.0 ? f : 0.0;
}

}  // namespace detail

inline double observable_cos2pi(double x) { return std::cos(2.0 * std::numbers::pi * x); }
inline double observable_sin2pi(double x) { return std::sin(2.0 * std::numbers::pi * x); }
inline double observable_identity(double x) { return x; }
inline double observable_indicator_half(double x) { return x < 0.5 ? 1.0 : 0.0; }

using Observable = double (*)(double);

struct NamedObservable {
  std::string_view name;
  Observable fn;
};

/// Registry of named observables usable from run configurations:
/// cos2pi -> cos(2 pi x), sin2pi -> sin(2 pi x), x -> identity,
/// indicator_half -> indicator of [0, 1/2).
inline constexpr std::array<NamedObservable, 4> kObservableRegistry = {{
    {"cos2pi", &observable_cos2pi},
    {"sin2pi", &observable_sin2pi},
    {"x", &observable_identity},
    {"indicator_half", &observable_indicator_half},
}};

inline Observable find_observable(std::string_view name) {
  for (const auto& entry : kObservableRegistry)
    if (entry.name == name) return entry.fn;
  throw config_error("unknown_observable",
                     "unknown observable '" + std::string(name) +
                         "'; known names: cos2pi, sin2pi, x, indicator_half");
}

/// Mean of observe(x_j) over `steps` iterates of the map, starting at x0.
template <typename Func>
double orbit_average(const MapSpec& map, double x0, std::int64_t steps,
                     Func&& observe) {
  if (steps < 1) throw domain_error("steps must be >= 1");
  if (!std::isfinite(x0)) throw domain_error("x0 must be finite");
  double acc = 0.0;
  switch (map.kind()) {
    case MapSpec::Kind::rotation: {
      double x = detail::wrap_unit(x0);
      const double theta = map.frequency();
      for (std::int64_t j = 0; j < steps; ++j) {
        acc += observe(x);
        x += theta;
        x -= std::floor(x);
      }
      break;
    }
    case MapSpec::Kind::doubling: {
      constexpr std::uint64_t modulus = detail::kDoublingModulus;
      std::uint64_t n = static_cast<std::uint64_t>(
                            detail::wrap_unit(x0) * static_cast<double>(modulus)) %
                        modulus;
      const double inv = 1.0 / static_cast<double>(modulus);
      for (std::int64_t j = 0; j < steps; ++j) {
        acc += observe(static_cast<double>(n) * inv);
        n = (2 * n) % modulus;
      }
      break;
    }
    case MapSpec::Kind::affine_contraction: {
      if (!(x0 >= 0.0 && x0 <= 1.0))
        throw domain_error("affine_contraction requires x0 in [0, 1]");
      double x = x0;
      const double a = map.factor(), b = map.offset();
      for (std::int64_t j = 0; j < steps; ++j) {
        acc += observe(x);
        x = a * x + b;
      }
      break;
    }
  }
  return acc / static_cast<double>(steps);
}

struct BirkhoffReport {
  std::string observable;
  double time_average = 0.0;
  double space_average = 0.0;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::int64_t steps = 0;
};

/// Iterates the map, averages the named observable along the orbit and
/// compares against the analytically supplied space average.
inline BirkhoffReport birkhoff_check(const MapSpec& map, const std::string& observable,
                                     double x0, std::int64_t steps,
                                     double space_average, double tolerance) {
  if (!(tolerance > 0.0) || !std::isfinite(tolerance))
    throw domain_error("tolerance must be > 0");
  if (!std::isfinite(space_average))
    throw domain_error("space average must be finite");
  const Observable fn = find_observable(observable);
  BirkhoffReport report;
  report.observable = observable;
  report.steps = steps;
  report.space_average = space_average;
  report.tolerance = tolerance;
  report.time_average = orbit_average(map, x0, steps, fn);
  report.deviation = std::abs(report.time_average - space_average);
  report.pass = report.deviation <= tolerance;
  return report;
}

/// Observable samples along a trajectory, uniformly spaced by dt.
class ObservableSeries {
 public:
  explicit ObservableSeries(Eigen::ArrayXd values, double dt = 1.0)
      : values_(std::move(values)), dt_(dt) {
    if (values_.size() == 0) throw domain_error("series must be non-empty");
    if (!values_.isFinite().all()) throw domain_error("series values must be finite");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw domain_error("dt must be > 0");
  }

  const Eigen::ArrayXd& values() const noexcept { return values_; }
  double dt() const noexcept { return dt_; }
  Eigen::Index size() const noexcept { return values_.size(); }

 private:
  Eigen::ArrayXd values_;
  double dt_;
};

inline double time_average(const ObservableSeries& series) {
  return series.values().mean();
}

/// Prefix means <phi>_t for t = 1..N.
inline Eigen::ArrayXd running_average(const ObservableSeries& series) {
  Eigen::ArrayXd out(series.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < series.size(); ++i) {
    acc += series.values()[i];
    out[i] = acc / static_cast<double>(i + 1);
  }
  return out;
}

struct SteadyStateSpec {
  double zeta = 0.0;     // target value zeta_S
  double epsilon = 0.0;  // band half-width epsilon_S, > 0
  Eigen::Index window = 1;  // trailing running-average samples to check
};

/// True iff every running average in the trailing window stays within
/// epsilon of zeta.
inline bool epsilon_steady_state(const ObservableSeries& series,
                                 const SteadyStateSpec& spec) {
  if (!(spec.epsilon > 0.0) || !std::isfinite(spec.epsilon))
    throw domain_error("epsilon must be > 0");
  if (!std::isfinite(spec.zeta)) throw domain_error("zeta must be finite");
  if (spec.window < 1) throw domain_error("window must be >= 1");
  if (spec.window > series.size())
    throw domain_error("window exceeds the running-average length");
  const Eigen::ArrayXd averages = running_average(series);
  for (Eigen::Index i = series.size() - spec.window; i < series.size(); ++i)
    if (std::abs(averages[i] - spec.zeta) > spec.epsilon) return false;
  return true;
}

/// Tabulated absolutely-continuous spectral density d xi / d lambda on a
/// strictly increasing frequency grid.
class SpectralDensity {
 public:
  SpectralDensity(Eigen::ArrayXd grid, Eigen::ArrayXd density)
      : grid_(std::move(grid)), density_(std::move(density)) {
    if (grid_.size() != density_.size() || grid_.size() < 2)
      throw domain_error("grid and density must have equal length >= 2");
    if (!grid_.isFinite().all() || !density_.isFinite().all())
      throw domain_error("grid and density must be finite");
    for (Eigen::Index i = 1; i < grid_.size(); ++i)
      if (!(grid_[i] > grid_[i - 1]))
        throw domain_error("grid must be strictly increasing");
    if ((density_ < 0.0).any())
      throw domain_error("density must be non-negative");
  }

  const Eigen::ArrayXd& grid() const noexcept { return grid_; }
  const Eigen::ArrayXd& density() const noexcept { return density_; }

 private:
  Eigen::ArrayXd grid_;
  Eigen::ArrayXd density_;
};

struct WienerKreinReport {
  Eigen::ArrayXd truncations;
  Eigen::ArrayXd integrals;  // empty when the density vanishes somewhere
  bool regular = false;
  std::string reason;  // gap_within_threshold | gap_exceeded | zero_density_sample
  std::optional<double> cauchy_gap;
  double gap_threshold = 0.0;
};

inline Eigen::ArrayXd default_truncation_ladder() {
  Eigen::ArrayXd ladder(4);
  ladder << 2.0, 4.0, 8.0, 16.0;
  return ladder;
}

namespace detail {

inline double interpolate_density(const SpectralDensity& sd, double x) {
  const Eigen::ArrayXd& g = sd.grid();
  Eigen::Index hi = 1;
  while (hi < g.size() - 1 && g[hi] < x) ++hi;
  const Eigen::Index lo = hi - 1;
  const double t = (x - g[lo]) / (g[hi] - g[lo]);
  return (1.0 - t) * sd.density()[lo] + t * sd.density()[hi];
}

// Trapezoid of ln(density)/(1 + lambda^2) over [-L, L] on the tabulated grid,
// with linearly interpolated density at the clipped endpoints.
inline double truncated_log_integral(const SpectralDensity& sd, double limit) {
  const Eigen::ArrayXd& g = sd.grid();
  auto integrand = [](double lambda, double rho) {
    return std::log(rho) / (1.0 + lambda * lambda);
  };
  double prev_x = -limit;
  double prev_f = integrand(prev_x, interpolate_density(sd, prev_x));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (g[i] <= -limit) continue;
    if (g[i] >= limit) break;
    const double x = g[i];
    const double f = integrand(x, sd.density()[i]);
    acc += 0.5 * (prev_f + f) * (x - prev_x);
    prev_x = x;
    prev_f = f;
  }
  const double f_end = integrand(limit, interpolate_density(sd, limit));
  acc += 0.5 * (prev_f + f_end) * (limit - prev_x);
  return acc;
}

}  // namespace detail

/// Truncated integrals I(L) = int_{-L}^{L} ln(density)/(1+lambda^2) dlambda
/// for each ladder value, plus a regularity verdict. The verdict compares the
/// weight-normalized means J(L) = I(L) / (2 atan L) at the last two rungs:
/// for a density bounded away from 0 and infinity J settles (constant density
/// gives J = ln c exactly at every rung), while a log-divergent density walks
/// away without bound. A zero density sample is an immediate log singularity
/// and yields `divergent` rather than an exception.
inline WienerKreinReport wiener_krein_integral(const SpectralDensity& density,
                                               const Eigen::ArrayXd& truncations,
                                               double gap_threshold = 1e-3) {
  if (truncations.size() < 2)
    throw domain_error("need at least two truncations for a verdict");
  if (!(gap_threshold > 0.0)) throw domain_error("gap threshold must be > 0");
  for (Eigen::Index i = 0; i < truncations.size(); ++i) {
    if (!(truncations[i] > 0.0) || !std::isfinite(truncations[i]))
      throw domain_error("truncations must be positive and finite");
    if (i > 0 && !(truncations[i] > truncations[i - 1]))
      throw domain_error("truncations must be strictly increasing");
  }
  const double widest = truncations[truncations.size() - 1];
  if (-widest < density.grid()[0] || widest > density.grid()[density.grid().size() - 1])
    throw domain_error("truncations must lie within the tabulated grid range");

  WienerKreinReport report;
  report.truncations = truncations;
  report.gap_threshold = gap_threshold;

  if ((density.density() == 0.0).any()) {
    report.regular = false;
    report.reason = "zero_density_sample";
    return report;
  }

  report.integrals.resize(truncations.size());
  for (Eigen::Index i = 0; i < truncations.size(); ++i)
    report.integrals[i] = detail::truncated_log_integral(density, truncations[i]);

  const Eigen::Index m = truncations.size();
  auto normalized = [&](Eigen::Index i) {
    return report.integrals[i] / (2.0 * std::atan(truncations[i]));
  };
  const double gap = std::abs(normalized(m - 1) - normalized(m - 2));
  report.cauchy_gap = gap;
  report.regular = gap <= gap_threshold;
  report.reason = report.regular ? "gap_within_threshold" : "gap_exceeded";
  return report;
}

inline WienerKreinReport wiener_krein_integral(const SpectralDensity& density) {
  return wiener_krein_integral(density, default_truncation_ladder());
}

/// Mean of ln|det J| along a trajectory; negative means the phase volume
/// contracts.
template <typename Derived>
double phase_volume_rate(const Eigen::ArrayBase<Derived>& jacobian_dets) {
  const auto& dets = jacobian_dets.derived();
  if (dets.size() == 0)
    throw domain_error("phase_volume_rate needs at least one determinant");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < dets.size(); ++i) {
    const double magnitude = std::abs(dets[i]);
    if (!(magnitude > 0.0) || !std::isfinite(magnitude))
      throw domain_error("degenerate map: zero or non-finite jacobian determinant");
    acc += std::log(magnitude);
  }
  return acc / static_cast<double>(dets.size());
}

}  // namespace kgen
