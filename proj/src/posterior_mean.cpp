#include "levyshrink/posterior_mean.hpp"

#include <algorithm>
#include <boost/math/special_functions/expint.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "levyshrink/errors.hpp"

namespace levyshrink {

namespace {

constexpr double kPi = std::numbers::pi;

double log_normal_pdf(double x, double var) {
  return -0.5 * std::log(2.0 * kPi * var) - 0.5 * x * x / var;
}

double fd_step(double y) { return 1e-5 * std::max(1.0, std::abs(y)); }

double typical_scale(const SubordinatorSpec& s) {
  switch (s.family()) {
    case Family::Gamma: return s.time();
    case Family::InverseGaussian: return s.time() / s.rate();
    case Family::Stable: {
      const double k = s.time() * s.scale();
      return k * k / 6.0;
    }
    default: return s.time();
  }
}

}  // namespace

MeansProblem::MeansProblem(PenaltySpec penalty, double noise_sd, QuadratureSettings settings)
    : penalty_(penalty), sigma_(noise_sd), settings_(settings) {
  penalty.validate();
  if (penalty.transform != Transform::HalfSquare) {
    throw PreconditionError("normal means problems need a HalfSquare penalty");
  }
  if (!(noise_sd > 0.0)) throw DomainError("noise sd must be positive");
  prior_.emplace(penalty, settings_);

  const SubordinatorSpec clock = penalty.subordinator.with_time(penalty.nu);
  if (clock.family() == Family::Drift) {
    law_.atom = penalty.nu;
    law_.scale = penalty.nu;
  } else {
    levyshrink::log_marginal_density(clock, 1.0);  // throws UnsupportedCase when no closed form
    law_.scale = typical_scale(clock);
    auto raw = [clock](double t) { return -0.5 * std::log(t) + levyshrink::log_marginal_density(clock, t); };
    const double z = t_integral([&raw](double t) { return std::exp(raw(t)); });
    const double log_z = std::log(z);
    law_.log_density = [raw, log_z](double t) { return raw(t) - log_z; };
  }
  init_moments();
}

MeansProblem MeansProblem::horseshoe(double noise_sd, double tau, QuadratureSettings settings) {
  if (!(noise_sd > 0.0)) throw DomainError("noise sd must be positive");
  if (!(tau > 0.0)) throw DomainError("horseshoe tau must be positive");
  MeansProblem prob;
  prob.sigma_ = noise_sd;
  prob.tau_ = tau;
  prob.settings_ = settings;
  const double t2 = tau * tau;
  prob.law_.scale = 1.0 / t2;
  prob.law_.log_density = [t2](double t) {
    return std::log(t2 / kPi) - 0.5 * std::log(t2 * t) - std::log1p(t2 * t);
  };
  prob.init_moments();
  return prob;
}

double MeansProblem::t_integral(const std::function<double(double)>& f) const {
  const double s = law_.scale;
  return integrate_piecewise(f, 0.0, kInf, {1e-2 * s, s, 1e2 * s}, settings_).value;
}

void MeansProblem::init_moments() {
  if (law_.atom) {
    inv_moment_ = 1.0 / *law_.atom;
    return;
  }
  // T^{-1} h(T) must be integrable at 0: its log-slope there must exceed -1.
  const double t1 = 1e-12;
  const double t2 = 1e-11;
  const double l1 = law_.log_density(t1) - std::log(t1);
  const double l2 = law_.log_density(t2) - std::log(t2);
  if (std::isfinite(l1) && std::isfinite(l2) && (l2 - l1) / std::log(t2 / t1) <= -1.0 + 1e-6) {
    inv_moment_ = std::numeric_limits<double>::infinity();
    return;
  }
  const auto& h = law_.log_density;
  inv_moment_ = t_integral([&h](double t) { return std::exp(h(t) - std::log(t)); });
}

double MeansProblem::marginal_density(double y, bool size_biased) const {
  if (size_biased && !levy_supported()) {
    throw IntegrabilityError("size-biased marginal needs E[T^-1] < inf");
  }
  const double s2 = sigma_ * sigma_;
  if (law_.atom) return std::exp(log_normal_pdf(y, s2 + 1.0 / *law_.atom));
  const auto& h = law_.log_density;
  auto f = [&](double t) {
    double l = log_normal_pdf(y, s2 + 1.0 / t) + h(t);
    if (size_biased) l -= std::log(t);
    return std::exp(l);
  };
  const double m = t_integral(f);
  return size_biased ? m / inv_moment_ : m;
}

double MeansProblem::log_marginal_density(double y, bool size_biased) const {
  return std::log(marginal_density(y, size_biased));
}

double MeansProblem::posterior_mean_ps(double y) const {
  const double h = fd_step(y);
  const double score = (log_marginal_density(y + h) - log_marginal_density(y - h)) / (2.0 * h);
  return y + sigma_ * sigma_ * score;
}

double MeansProblem::posterior_mean_levy(double y) const {
  if (!levy_supported()) {
    throw IntegrabilityError("size-biased representation needs E[T^-1] < inf");
  }
  const double h = fd_step(y);
  const double score =
      (log_marginal_density(y + h, true) - log_marginal_density(y - h, true)) / (2.0 * h);
  const double ratio = marginal_density(y, true) / marginal_density(y, false);
  return -inv_moment_ * ratio * score;
}

double MeansProblem::prior_density(double beta) const {
  if (prior_) return prior_->density(beta);
  // horseshoe: (2 pi^3)^{-1/2} e^x E1(x) / tau, x = beta^2 / (2 tau^2); infinite at 0
  const double x = 0.5 * beta * beta / (tau_ * tau_);
  if (x == 0.0) return std::numeric_limits<double>::infinity();
  double scaled_e1 = 0.0;
  if (x < 50.0) {
    scaled_e1 = std::exp(x) * boost::math::expint(1, x);
  } else {
    // asymptotic series e^x E1(x) ~ sum_k (-1)^k k! / x^{k+1}
    double term = 1.0 / x;
    for (int k = 1; k < 30 && std::abs(term) > 1e-17 / x; ++k) {
      scaled_e1 += term;
      term *= -k / x;
    }
  }
  return scaled_e1 / (std::sqrt(2.0 * kPi * kPi * kPi) * tau_);
}

double MeansProblem::posterior_mean_oracle(double y) const {
  const double s2 = sigma_ * sigma_;
  auto weight = [&](double b) {
    return std::exp(log_normal_pdf(y - b, s2)) * prior_density(b);
  };
  const double w = 10.0 * sigma_;
  const std::initializer_list<double> cuts{std::min(y, 0.0) - w, 0.0, y, std::max(y, 0.0) + w};
  const double den = integrate_piecewise(weight, -kInf, kInf, cuts, settings_).value;
  const double num =
      integrate_piecewise([&](double b) { return b * weight(b); }, -kInf, kInf, cuts, settings_)
          .value;
  return num / den;
}

double marginal_density(const MeansProblem& prob, double y, bool size_biased) {
  return prob.marginal_density(y, size_biased);
}
double posterior_mean_ps(const MeansProblem& prob, double y) { return prob.posterior_mean_ps(y); }
double posterior_mean_levy(const MeansProblem& prob, double y) {
  return prob.posterior_mean_levy(y);
}
double posterior_mean_oracle(const MeansProblem& prob, double y) {
  return prob.posterior_mean_oracle(y);
}

std::vector<MeanCurvePoint> mean_curve(const MeansProblem& prob, const std::vector<double>& ys,
                                       kernels::Exec exec) {
  return kernels::parallel_map<MeanCurvePoint>(
      ys.size(),
      [&](std::size_t i) {
        MeanCurvePoint pt;
        pt.y = ys[i];
        pt.mean_ps = prob.posterior_mean_ps(ys[i]);
        pt.mean_levy = prob.levy_supported() ? prob.posterior_mean_levy(ys[i])
                                             : std::numeric_limits<double>::quiet_NaN();
        pt.mean_oracle = prob.posterior_mean_oracle(ys[i]);
        return pt;
      },
      exec);
}

}  // namespace levyshrink
