#pragma once

#include <span>
#include <string>

#include "levyshrink/levy_core.hpp"
#include "levyshrink/quadrature.hpp"

namespace levyshrink {

enum class Transform { HalfSquare, Abs };

std::string to_string(Transform transform);

/// f(beta): beta^2 / 2 or |beta|.
double apply_transform(Transform transform, double beta) noexcept;

/// Penalty nu * psi(f(beta)), psi the subordinator's unit-time Laplace exponent.
struct PenaltySpec {
  SubordinatorSpec subordinator;
  Transform transform = Transform::HalfSquare;
  double nu = 1.0;

  void validate() const;
  std::string describe() const;
};

/// chi(sum_j psi(f(beta_j))) with chi the exponent of `outer`.  The inner nu
/// is not used: the outer subordinator plays its role.
struct MixturePenaltySpec {
  SubordinatorSpec outer;
  PenaltySpec inner;
};

double penalty_value(const PenaltySpec& pen, double beta);

/// d/dbeta of penalty_value; 0 at beta = 0 unless the derivative has a pole.
double penalty_derivative(const PenaltySpec& pen, double beta);

/// E[T | beta] under p(T | beta) proportional to exp(-T f(beta)) p(T):
/// nu psi'(beta^2/2) or nu psi'(|beta|).  Throws PoleError at beta = 0 when
/// psi' diverges there.
double conditional_moment(const PenaltySpec& pen, double beta);

/// conditional_moment with |beta| floored at `floor`, for EM weights.
double em_weight(const PenaltySpec& pen, double beta, double floor = 1e-8);

double mixture_penalty(const MixturePenaltySpec& spec, std::span<const double> beta);

/// Normalized prior C exp(-nu psi(f(beta))).  The constant is computed once by
/// quadrature at construction; construction throws IntegrabilityError when
/// the tails are too heavy to normalize.
class PriorDensity {
 public:
  explicit PriorDensity(PenaltySpec pen, QuadratureSettings settings = {});

  double log_density(double beta) const;
  double density(double beta) const;
  double log_normalizer() const noexcept { return log_c_; }
  const PenaltySpec& penalty() const noexcept { return pen_; }

 private:
  PenaltySpec pen_;
  double log_c_ = 0.0;
};

/// Convenience wrapper: builds a PriorDensity and evaluates it.
double prior_log_density(const PenaltySpec& pen, double beta);

}  // namespace levyshrink
