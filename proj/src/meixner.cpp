#include "levyshrink/meixner.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <numbers>

#include "levyshrink/errors.hpp"
#include "levyshrink/kernels.hpp"
#include "levyshrink/quadrature.hpp"
#include "levyshrink/special.hpp"

namespace levyshrink {

namespace {
constexpr double kPi = std::numbers::pi;

bool is_base(const MeixnerZParams& p) { return std::abs(p.delta - 0.5) < 1e-15; }
}  // namespace

void MeixnerZParams::validate() const {
  if (!(a > 0.0) || !(b > 0.0) || !(sigma > 0.0) || !(delta > 0.0)) {
    throw DomainError("z parameters a, b, sigma, delta must be positive");
  }
  if (!std::isfinite(mu)) throw DomainError("z location must be finite");
}

MeixnerZParams MeixnerZParams::piece(std::size_t p) const {
  if (p == 0) throw PreconditionError("piece count must be >= 1");
  MeixnerZParams out = *this;
  out.mu = mu / static_cast<double>(p);
  out.delta = delta / static_cast<double>(p);
  return out;
}

std::complex<double> z_char_fn(const MeixnerZParams& params, double t) {
  params.validate();
  const double x = params.sigma * t / (2.0 * kPi);
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> log_ratio = special::lgamma({params.a, x}) +
                                         special::lgamma({params.b, -x}) -
                                         std::lgamma(params.a) - std::lgamma(params.b);
  return std::exp(2.0 * params.delta * log_ratio + i * params.mu * t);
}

double log_meixner_density(const MeixnerZParams& params, double z) {
  params.validate();
  if (!is_base(params)) {
    throw UnsupportedCase("generalized-z density has no closed form for delta != 1/2");
  }
  const double w = (z - params.mu) / params.sigma;
  if (std::abs(params.a + params.b - 1.0) < 1e-14) {
    const double c = params.c();
    return std::log(std::cos(0.5 * c) / (params.sigma * kPi)) + c * w +
           special::log_abs_gamma_half_sq(w);
  }
  const double u = 2.0 * kPi * w;
  const double log_beta =
      std::lgamma(params.a) + std::lgamma(params.b) - std::lgamma(params.a + params.b);
  return std::log(2.0 * kPi / params.sigma) - log_beta + params.a * u -
         (params.a + params.b) * special::log1pexp(u);
}

double meixner_density(const MeixnerZParams& params, double z) {
  return std::exp(log_meixner_density(params, z));
}

double gz_levy_density(const MeixnerZParams& params, double x) {
  params.validate();
  if (x == 0.0) throw DomainError("generalized-z Levy density has a pole at 0");
  const double ax = std::abs(x);
  const double y = 2.0 * kPi * ax / params.sigma;
  const double rate = x > 0.0 ? params.b : params.a;
  return 2.0 * params.delta * std::exp(-rate * y) / (ax * -std::expm1(-y));
}

double gz_brownian_part(const MeixnerZParams& params) {
  params.validate();
  const double a = params.a;
  const double b = params.b;
  auto f = [a, b](double x) { return (std::exp(-b * x) - std::exp(-a * x)) / -std::expm1(-x); };
  const double integral = a == b ? 0.0 : integrate(f, 0.0, 2.0 * kPi / params.sigma).value;
  return params.sigma * params.delta / kPi * integral + params.mu;
}

double lamperti_mixing_density(double alpha, double v) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("Lamperti index must lie in (0,1)");
  if (!(v > 0.0)) throw DomainError("Lamperti mixing density is defined for v > 0");
  const double va = std::pow(v, alpha);
  return std::sin(kPi * alpha) / kPi * (va / v) / (va * va + 2.0 * va * std::cos(kPi * alpha) + 1.0);
}

double draw_gz_series(const MeixnerZParams& params, std::size_t terms, Rng& rng) {
  const double a = params.a;
  const double b = params.b;
  const double shape = 2.0 * params.delta;
  double sum = shape * (boost::math::digamma(a) - boost::math::digamma(b));
  for (std::size_t k = 0; k < terms; ++k) {
    const double kk = static_cast<double>(k);
    sum += (shape - rng.gamma(shape)) / (a + kk) - (shape - rng.gamma(shape)) / (b + kk);
  }
  const double kt = static_cast<double>(terms);
  const double tail_var = shape * (boost::math::trigamma(a + kt) + boost::math::trigamma(b + kt));
  sum += std::sqrt(tail_var) * rng.normal();
  return params.mu + params.sigma / (2.0 * kPi) * sum;
}

double draw_z_exact(const MeixnerZParams& params, Rng& rng) {
  if (!is_base(params)) throw UnsupportedCase("exact z sampler requires delta = 1/2");
  const double logit = std::log(rng.gamma(params.a)) - std::log(rng.gamma(params.b));
  return params.mu + params.sigma / (2.0 * kPi) * logit;
}

IncrementVector sample_meixner_increments(const MeixnerZParams& params, std::size_t p,
                                          std::uint64_t seed, std::size_t terms) {
  params.validate();
  if (p == 0) throw PreconditionError("sample_meixner_increments requires p >= 1");
  IncrementVector out;
  out.grid_step = 1.0 / static_cast<double>(p);
  out.interpretation = Interpretation::log_variance;
  out.values = kernels::meixner_increments(params.piece(p), p, seed, terms,
                                           p == 1 && is_base(params));
  return out;
}

}  // namespace levyshrink
