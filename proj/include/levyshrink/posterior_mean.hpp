#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "levyshrink/kernels.hpp"
#include "levyshrink/penalty.hpp"
#include "levyshrink/quadrature.hpp"

namespace levyshrink {

/// Law of the prior precision T in beta | T ~ N(0, 1/T).  Either an atom
/// (normal prior) or a density h on (0, inf).
///
/// For a HalfSquare penalty built on the subordinator T(nu) with density g,
/// exp(-nu psi(beta^2/2)) = E exp(-T beta^2 / 2), so h is proportional to
/// T^{-1/2} g(T).
struct PrecisionLaw {
  std::optional<double> atom;
  std::function<double(double)> log_density;
  /// A representative scale of T, used to place quadrature breakpoints.
  double scale = 1.0;
};

/// Normal means problem y ~ N(beta, sigma^2) with a scale-mixture prior.
class MeansProblem {
 public:
  /// Prior proportional to exp(-nu psi(beta^2/2)).  Needs a closed-form
  /// marginal for T(nu): Gamma, InverseGaussian, Stable(1/2) or Drift.
  MeansProblem(PenaltySpec penalty, double noise_sd, QuadratureSettings settings = {1e-12, 15});

  /// Horseshoe: T ~ IB(1/2, 1/2) / tau^2.  E[T^{-1}] is infinite, so only the
  /// marginal, the score formula and the oracle are available.
  static MeansProblem horseshoe(double noise_sd, double tau = 1.0,
                                QuadratureSettings settings = {1e-12, 15});

  double noise_sd() const noexcept { return sigma_; }
  /// E[T^{-1}] under h; infinite when the size-biased representation does not exist.
  double inverse_moment() const noexcept { return inv_moment_; }
  bool levy_supported() const noexcept { return std::isfinite(inv_moment_); }

  /// m(y), or m*(y) for the prior with precision law T^{-1} h(T) / E[T^{-1}].
  double marginal_density(double y, bool size_biased = false) const;
  double log_marginal_density(double y, bool size_biased = false) const;

  /// y + sigma^2 d/dy log m(y).
  double posterior_mean_ps(double y) const;
  /// -E[T^{-1}] (m*(y) / m(y)) d/dy log m*(y).
  double posterior_mean_levy(double y) const;
  /// int beta N(y - beta | 0, sigma^2) p(beta) dbeta / m(y), directly on the beta axis.
  double posterior_mean_oracle(double y) const;

  /// Prior density p(beta), evaluated without the precision representation.
  double prior_density(double beta) const;

 private:
  MeansProblem() = default;
  void init_moments();
  double t_integral(const std::function<double(double)>& f) const;

  std::optional<PenaltySpec> penalty_;
  std::optional<PriorDensity> prior_;
  double tau_ = 1.0;
  double sigma_ = 1.0;
  QuadratureSettings settings_;
  PrecisionLaw law_;
  double inv_moment_ = 0.0;
};

double marginal_density(const MeansProblem& prob, double y, bool size_biased = false);
double posterior_mean_ps(const MeansProblem& prob, double y);
double posterior_mean_levy(const MeansProblem& prob, double y);
double posterior_mean_oracle(const MeansProblem& prob, double y);

struct MeanCurvePoint {
  double y = 0.0;
  double mean_ps = 0.0;
  double mean_levy = 0.0;  // NaN when the size-biased route is unavailable
  double mean_oracle = 0.0;
};

/// All three evaluators on a y-grid, one grid point per task.
std::vector<MeanCurvePoint> mean_curve(const MeansProblem& prob, const std::vector<double>& ys,
                                       kernels::Exec exec = kernels::Exec::parallel);

}  // namespace levyshrink
