#include "levyshrink/penalty.hpp"

#include <cmath>
#include <sstream>

#include "levyshrink/errors.hpp"

namespace levyshrink {

std::string to_string(Transform transform) {
  return transform == Transform::HalfSquare ? "sq" : "abs";
}

double apply_transform(Transform transform, double beta) noexcept {
  return transform == Transform::HalfSquare ? 0.5 * beta * beta : std::abs(beta);
}

void PenaltySpec::validate() const {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("penalty nu must be positive");
}

std::string PenaltySpec::describe() const {
  std::ostringstream os;
  os << subordinator.describe() << " f=" << to_string(transform) << " nu=" << nu;
  return os.str();
}

double penalty_value(const PenaltySpec& pen, double beta) {
  pen.validate();
  return pen.nu * laplace_exponent(pen.subordinator, apply_transform(pen.transform, beta));
}

double penalty_derivative(const PenaltySpec& pen, double beta) {
  if (beta == 0.0) {
    if (derivative_has_pole(pen.subordinator) && pen.transform == Transform::Abs) {
      throw PoleError("penalty is not differentiable at 0", pen.subordinator.index() - 1.0);
    }
    if (pen.transform == Transform::Abs) {
      throw PoleError("penalty has a kink at 0", 0.0);
    }
    if (derivative_has_pole(pen.subordinator)) {
      // beta * psi'(beta^2/2) ~ |beta|^{2 alpha - 1}
      const double e = 2.0 * pen.subordinator.index() - 1.0;
      if (e < 0.0) throw PoleError("penalty derivative diverges at 0", e);
      if (e == 0.0) throw PoleError("penalty has a kink at 0", 0.0);
    }
    return 0.0;
  }
  const double w = conditional_moment(pen, beta);
  return pen.transform == Transform::HalfSquare ? w * beta : w * (beta > 0.0 ? 1.0 : -1.0);
}

double conditional_moment(const PenaltySpec& pen, double beta) {
  pen.validate();
  if (beta == 0.0 && derivative_has_pole(pen.subordinator)) {
    const double a = pen.subordinator.index();
    const double exponent = pen.transform == Transform::HalfSquare ? 2.0 * (a - 1.0) : a - 1.0;
    throw PoleError("E[T | beta] diverges as beta -> 0", exponent);
  }
  return pen.nu *
         laplace_exponent_derivative(pen.subordinator, apply_transform(pen.transform, beta));
}

double em_weight(const PenaltySpec& pen, double beta, double floor) {
  const double b = std::max(std::abs(beta), floor);
  return conditional_moment(pen, b);
}

double mixture_penalty(const MixturePenaltySpec& spec, std::span<const double> beta) {
  double inner = 0.0;
  for (double b : beta) {
    inner += laplace_exponent(spec.inner.subordinator, apply_transform(spec.inner.transform, b));
  }
  return laplace_exponent(spec.outer, inner);
}

namespace {

// d log p / d log beta far in the tail; the density integrates iff this is < -1.
double tail_log_slope(const PenaltySpec& pen) {
  const double b1 = 1e6;
  const double b2 = 2e6;
  return -(penalty_value(pen, b2) - penalty_value(pen, b1)) / std::log(b2 / b1);
}

}  // namespace

PriorDensity::PriorDensity(PenaltySpec pen, QuadratureSettings settings) : pen_(pen) {
  pen_.validate();
  const double slope = tail_log_slope(pen_);
  if (!(slope < -1.0 - 1e-9)) {
    std::ostringstream os;
    os << "exp(-penalty) is not integrable for " << pen_.describe() << " (tail exponent " << slope
       << ")";
    throw IntegrabilityError(os.str());
  }
  auto f = [this](double b) { return std::exp(-penalty_value(pen_, b)); };
  const double half = integrate_piecewise(f, 0.0, kInf, {1.0}, settings).value;
  log_c_ = -std::log(2.0 * half);
}

double PriorDensity::log_density(double beta) const { return log_c_ - penalty_value(pen_, beta); }

double PriorDensity::density(double beta) const { return std::exp(log_density(beta)); }

double prior_log_density(const PenaltySpec& pen, double beta) {
  return PriorDensity(pen).log_density(beta);
}

}  // namespace levyshrink
