#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>

#include "levyshrink/levy_core.hpp"

namespace levyshrink {

/// Generalized-z parameters.  delta = 1/2 is the z-distribution, the law of
/// mu + sigma/(2 pi) * logit(kappa) with kappa ~ Be(a, b).  With a + b = 1 it
/// is the Meixner law with skewness c = pi (2a - 1).
struct MeixnerZParams {
  double a = 0.5;
  double b = 0.5;
  double mu = 0.0;
  double sigma = 2.0 * std::numbers::pi;
  double delta = 0.5;

  double c() const noexcept { return std::numbers::pi * (2.0 * a - 1.0); }
  /// Parameters of one of p self-similar pieces: (a, b, mu/p, sigma, delta/p).
  MeixnerZParams piece(std::size_t p) const;
  void validate() const;
};

/// Characteristic function {B(a + i x, b - i x) / B(a, b)}^{2 delta} exp(i mu t), x = sigma t / 2 pi.
std::complex<double> z_char_fn(const MeixnerZParams& params, double t);

/// Density of the base (delta = 1/2) law.  Meixner form when a + b = 1, the
/// general z density otherwise.  Throws UnsupportedCase when delta != 1/2.
double meixner_density(const MeixnerZParams& params, double z);
double log_meixner_density(const MeixnerZParams& params, double z);

/// Levy density of the generalized-z law, nonnegative form:
///   x > 0: 2 delta exp(-2 pi b x / sigma) / (x (1 - exp(-2 pi x / sigma)))
///   x < 0: same with a and |x|.
double gz_levy_density(const MeixnerZParams& params, double x);

/// A = (sigma delta / pi) int_0^{2 pi / sigma} (e^{-bx} - e^{-ax}) / (1 - e^{-x}) dx + mu.
double gz_brownian_part(const MeixnerZParams& params);

/// Normal-Lamperti mixing density sin(pi a)/pi v^{a-1} / (v^{2a} + 2 v^a cos(pi a) + 1).
double lamperti_mixing_density(double alpha, double v);

/// One generalized-z draw from the gamma-series representation
///   mu + s [2 delta (digamma(a) - digamma(b))
///           + sum_{k<K} ((2 delta - G_k)/(a + k) - (2 delta - H_k)/(b + k)) + R],
/// s = sigma / 2 pi, G_k, H_k ~ Ga(2 delta), R the normal with the tail variance.
/// Sums of pieces drawn this way have exactly the law of one draw of the whole.
double draw_gz_series(const MeixnerZParams& params, std::size_t terms, Rng& rng);

/// Exact draw for delta = 1/2: mu + sigma/(2 pi) logit(Be(a, b)).
double draw_z_exact(const MeixnerZParams& params, Rng& rng);

/// p self-similar increments whose sum has the law of `params`.  p = 1 with
/// delta = 1/2 is sampled exactly; otherwise the series sampler is used.
IncrementVector sample_meixner_increments(const MeixnerZParams& params, std::size_t p,
                                          std::uint64_t seed, std::size_t terms = 32);

}  // namespace levyshrink
