#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <span>

namespace levyshrink {

struct QuadratureSettings {
  double rel_tol = 1e-10;
  /// Refinement levels for the double-exponential rules.
  std::size_t max_levels = 15;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

using Integrand = std::function<double(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Integral of f over [a, b]; either bound may be infinite.
///
/// Finite intervals use tanh-sinh, half lines exp-sinh, the whole line
/// sinh-sinh.  All three tolerate integrable endpoint singularities.  Throws
/// NumericError when the error estimate exceeds sqrt(rel_tol) * L1, i.e. when
/// the rule has clearly not resolved the integrand.
QuadResult integrate(const Integrand& f, double a, double b,
                     const QuadratureSettings& settings = {});

/// Integral over [a, b] split at the given interior points (kinks, peaks,
/// singularities).  Points outside (a, b) are ignored.
QuadResult integrate_piecewise(const Integrand& f, double a, double b,
                               std::span<const double> breakpoints,
                               const QuadratureSettings& settings = {});

inline QuadResult integrate_piecewise(const Integrand& f, double a, double b,
                                      std::initializer_list<double> breakpoints,
                                      const QuadratureSettings& settings = {}) {
  return integrate_piecewise(f, a, b, std::span<const double>(breakpoints.begin(), breakpoints.size()),
                             settings);
}

}  // namespace levyshrink
