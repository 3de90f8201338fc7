#pragma once

#include <complex>

namespace levyshrink::special {

/// Principal branch of log Gamma(z) for Re(z) > 0, continuous along vertical lines.
std::complex<double> lgamma(std::complex<double> z);

/// |Gamma(1/2 + i x)|^2 = pi / cosh(pi x), evaluated without overflow.
double abs_gamma_half_sq(double x);

/// log |Gamma(1/2 + i x)|^2.
double log_abs_gamma_half_sq(double x);

double normal_pdf(double x);
double normal_cdf(double x);
/// 1 - Phi(x), accurate in the upper tail.
double normal_sf(double x);
double normal_quantile(double p);
/// log(1 + exp(x)).
double log1pexp(double x);

}  // namespace levyshrink::special
