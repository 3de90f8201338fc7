#include "levyshrink/special.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>

#include "levyshrink/errors.hpp"

namespace levyshrink::special {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::complex<double> lgamma(std::complex<double> z) {
  if (!(z.real() > 0.0)) throw DomainError("complex lgamma requires Re(z) > 0");
  // Recurrence up to Re(z) >= 15, then the Stirling series.
  std::complex<double> shift{0.0, 0.0};
  while (z.real() < 15.0) {
    shift += std::log(z);
    z += 1.0;
  }
  static constexpr double kCoef[] = {1.0 / 12.0,        -1.0 / 360.0,  1.0 / 1260.0,
                                     -1.0 / 1680.0,     1.0 / 1188.0,  -691.0 / 360360.0,
                                     1.0 / 156.0};
  const std::complex<double> inv = 1.0 / z;
  const std::complex<double> inv2 = inv * inv;
  std::complex<double> series{0.0, 0.0};
  std::complex<double> power = inv;
  for (double c : kCoef) {
    series += c * power;
    power *= inv2;
  }
  const std::complex<double> stirling =
      (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + series;
  return stirling - shift;
}

double log_abs_gamma_half_sq(double x) {
  const double ax = kPi * std::abs(x);
  // pi / cosh(ax) = 2 pi e^{-ax} / (1 + e^{-2ax})
  return std::log(2.0 * kPi) - ax - std::log1p(std::exp(-2.0 * ax));
}

double abs_gamma_half_sq(double x) { return std::exp(log_abs_gamma_half_sq(x)); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile requires p in (0,1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double log1pexp(double x) {
  if (x > 35.0) return x;
  if (x < -35.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

}  // namespace levyshrink::special
