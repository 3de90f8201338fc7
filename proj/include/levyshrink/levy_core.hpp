#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "levyshrink/rng.hpp"

namespace levyshrink {

enum class Family { Gamma, Stable, InverseGaussian, CompoundPoisson, Drift };

std::string to_string(Family family);

/// A subordinator family with its parameters and an observation time s.
///
/// Laplace exponents per unit time:
///   Gamma                      log(1 + t)
///   Stable(alpha, scale)       scale * t^alpha
///   InverseGaussian(rate nu)   sqrt(nu^2 + 2t) - nu
///   CompoundPoisson(theta, eta) theta * (1 - exp(-t eta^2))
///   Drift                      t                      (T(s) = s, the ridge limit)
///
/// CompoundPoisson jumps by exactly eta^2, so W(T(s)) is the compound
/// Poisson process with N(0, eta^2) jumps used by the two-groups model.
class SubordinatorSpec {
 public:
  static SubordinatorSpec gamma(double time = 1.0);
  static SubordinatorSpec stable(double index, double scale = 1.0, double time = 1.0);
  /// Stable(1/2) scaled so that exp{-s psi(beta^2/2)} = exp{-s |beta|}.
  static SubordinatorSpec lasso(double time = 1.0);
  static SubordinatorSpec inverse_gaussian(double rate, double time = 1.0);
  static SubordinatorSpec compound_poisson(double jump_rate, double jump_sd, double time = 1.0);
  static SubordinatorSpec drift(double time = 1.0);

  Family family() const noexcept { return family_; }
  double time() const noexcept { return time_; }
  double index() const noexcept { return index_; }
  double scale() const noexcept { return scale_; }
  double rate() const noexcept { return rate_; }
  double jump_rate() const noexcept { return jump_rate_; }
  double jump_sd() const noexcept { return jump_sd_; }

  SubordinatorSpec with_time(double time) const;
  std::string describe() const;

 private:
  SubordinatorSpec(Family family, double time) : family_(family), time_(time) {}
  void validate() const;

  Family family_;
  double time_ = 1.0;
  double index_ = 0.5;
  double scale_ = 1.0;
  double rate_ = 1.0;
  double jump_rate_ = 1.0;
  double jump_sd_ = 1.0;
};

/// psi(t) for t >= 0; E exp(-t T(s)) = exp(-s psi(t)).  Throws DomainError for t < 0.
double laplace_exponent(const SubordinatorSpec& spec, double t);

/// psi'(t).  Infinite at t = 0 for Stable.
double laplace_exponent_derivative(const SubordinatorSpec& spec, double t);

/// Whether psi'(t) diverges as t -> 0.
bool derivative_has_pole(const SubordinatorSpec& spec) noexcept;

/// Levy density mu(x), x > 0.  CompoundPoisson (an atom at eta^2) and Drift
/// (no jumps) have none and throw UnsupportedCase.
double levy_density(const SubordinatorSpec& spec, double x);

/// Density of T(s) at x > 0, with s = spec.time().  Closed forms exist for
/// Gamma, InverseGaussian and Stable(1/2); other cases throw UnsupportedCase.
double marginal_density(const SubordinatorSpec& spec, double x);
double log_marginal_density(const SubordinatorSpec& spec, double x);

enum class Interpretation { variance, precision, log_variance, location };

struct IncrementVector {
  std::vector<double> values;
  double grid_step = 1.0;
  Interpretation interpretation = Interpretation::variance;

  std::size_t size() const noexcept { return values.size(); }
  double sum() const noexcept;
};

/// One draw of T(t0 + dt) - T(t0).
double draw_increment(const SubordinatorSpec& spec, double dt, Rng& rng);

/// p independent increments T(s j/p) - T(s (j-1)/p), j = 1..p.  Each family is
/// sampled exactly; the output is a function of (spec, p, seed) only.
IncrementVector sample_increments(const SubordinatorSpec& spec, std::size_t p, std::uint64_t seed,
                                  Interpretation as = Interpretation::variance);

/// Positive alpha-stable variate with E exp(-t S) = exp(-t^alpha) (Kanter's representation).
double draw_positive_stable(double alpha, Rng& rng);

/// Inverse-Gaussian variate with the given mean and shape (Michael, Schucany and Haas).
double draw_inverse_gaussian(double mean, double shape, Rng& rng);

// ---- compound-Poisson two-groups model -------------------------------------

/// Increments of Z(s) = sum_{i <= N(s)} J_i, N Poisson(theta), J_i ~ N(0, eta^2),
/// on a grid of step delta.  A slot is exactly zero when no jump lands in it.
IncrementVector sample_two_groups(double theta, double delta, double eta, std::size_t p,
                                  std::uint64_t seed);

/// Leading-order slope of P(|beta_j| > eps) in delta: theta * P(|J| > eps).
double two_groups_exceedance_slope(double theta, double eta, double eps);

/// Observations of the interlacing process Y(s) = Z(s) + sigma W(s) on the
/// same grid: y_j = beta_j + sigma * sqrt(delta) * N(0, 1).
std::vector<double> simulate_interlacing(const IncrementVector& signal, double noise_scale,
                                         std::uint64_t seed);

}  // namespace levyshrink
