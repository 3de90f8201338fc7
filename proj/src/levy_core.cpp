#include "levyshrink/levy_core.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "levyshrink/errors.hpp"
#include "levyshrink/kernels.hpp"
#include "levyshrink/special.hpp"

namespace levyshrink {

namespace {
constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be strictly positive and finite");
  }
}
}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::Gamma: return "gamma";
    case Family::Stable: return "stable";
    case Family::InverseGaussian: return "inverse-gaussian";
    case Family::CompoundPoisson: return "compound-poisson";
    case Family::Drift: return "drift";
  }
  return "unknown";
}

SubordinatorSpec SubordinatorSpec::gamma(double time) {
  SubordinatorSpec s(Family::Gamma, time);
  s.validate();
  return s;
}

SubordinatorSpec SubordinatorSpec::stable(double index, double scale, double time) {
  SubordinatorSpec s(Family::Stable, time);
  s.index_ = index;
  s.scale_ = scale;
  s.validate();
  return s;
}

SubordinatorSpec SubordinatorSpec::lasso(double time) {
  return stable(0.5, std::numbers::sqrt2, time);
}

SubordinatorSpec SubordinatorSpec::inverse_gaussian(double rate, double time) {
  SubordinatorSpec s(Family::InverseGaussian, time);
  s.rate_ = rate;
  s.validate();
  return s;
}

SubordinatorSpec SubordinatorSpec::compound_poisson(double jump_rate, double jump_sd, double time) {
  SubordinatorSpec s(Family::CompoundPoisson, time);
  s.jump_rate_ = jump_rate;
  s.jump_sd_ = jump_sd;
  s.validate();
  return s;
}

SubordinatorSpec SubordinatorSpec::drift(double time) {
  SubordinatorSpec s(Family::Drift, time);
  s.validate();
  return s;
}

SubordinatorSpec SubordinatorSpec::with_time(double time) const {
  SubordinatorSpec s = *this;
  s.time_ = time;
  s.validate();
  return s;
}

void SubordinatorSpec::validate() const {
  require_positive(time_, "subordinator time");
  switch (family_) {
    case Family::Stable:
      if (!(index_ > 0.0 && index_ < 1.0)) throw DomainError("stable index must lie in (0,1)");
      require_positive(scale_, "stable scale");
      break;
    case Family::InverseGaussian: require_positive(rate_, "inverse-Gaussian rate"); break;
    case Family::CompoundPoisson:
      require_positive(jump_rate_, "compound-Poisson jump rate");
      require_positive(jump_sd_, "compound-Poisson jump sd");
      break;
    case Family::Gamma:
    case Family::Drift: break;
  }
}

std::string SubordinatorSpec::describe() const {
  std::ostringstream os;
  os << to_string(family_) << "(";
  switch (family_) {
    case Family::Stable: os << "index=" << index_ << ",scale=" << scale_ << ","; break;
    case Family::InverseGaussian: os << "rate=" << rate_ << ","; break;
    case Family::CompoundPoisson: os << "theta=" << jump_rate_ << ",eta=" << jump_sd_ << ","; break;
    default: break;
  }
  os << "time=" << time_ << ")";
  return os.str();
}

double laplace_exponent(const SubordinatorSpec& spec, double t) {
  if (!(t >= 0.0)) throw DomainError("Laplace exponent requires t >= 0");
  switch (spec.family()) {
    case Family::Gamma: return std::log1p(t);
    case Family::Stable: return spec.scale() * std::pow(t, spec.index());
    case Family::InverseGaussian: {
      const double nu = spec.rate();
      // sqrt(nu^2 + 2t) - nu without cancellation for small t
      return 2.0 * t / (std::sqrt(nu * nu + 2.0 * t) + nu);
    }
    case Family::CompoundPoisson: {
      const double eta2 = spec.jump_sd() * spec.jump_sd();
      return -spec.jump_rate() * std::expm1(-t * eta2);
    }
    case Family::Drift: return t;
  }
  return 0.0;
}

double laplace_exponent_derivative(const SubordinatorSpec& spec, double t) {
  if (!(t >= 0.0)) throw DomainError("Laplace exponent requires t >= 0");
  switch (spec.family()) {
    case Family::Gamma: return 1.0 / (1.0 + t);
    case Family::Stable: {
      if (t == 0.0) return std::numeric_limits<double>::infinity();
      return spec.scale() * spec.index() * std::pow(t, spec.index() - 1.0);
    }
    case Family::InverseGaussian: return 1.0 / std::sqrt(spec.rate() * spec.rate() + 2.0 * t);
    case Family::CompoundPoisson: {
      const double eta2 = spec.jump_sd() * spec.jump_sd();
      return spec.jump_rate() * eta2 * std::exp(-t * eta2);
    }
    case Family::Drift: return 1.0;
  }
  return 0.0;
}

bool derivative_has_pole(const SubordinatorSpec& spec) noexcept {
  return spec.family() == Family::Stable;
}

double levy_density(const SubordinatorSpec& spec, double x) {
  if (!(x > 0.0)) throw DomainError("Levy density is defined for x > 0");
  switch (spec.family()) {
    case Family::Gamma: return std::exp(-x) / x;
    case Family::Stable: {
      const double a = spec.index();
      return spec.scale() * a / std::tgamma(1.0 - a) * std::pow(x, -1.0 - a);
    }
    case Family::InverseGaussian: {
      const double nu = spec.rate();
      return std::exp(-0.5 * nu * nu * x) / (std::sqrt(2.0 * kPi) * x * std::sqrt(x));
    }
    case Family::CompoundPoisson:
      throw UnsupportedCase("compound-Poisson Levy measure is an atom at eta^2; it has no density");
    case Family::Drift: throw UnsupportedCase("a pure drift has no jumps");
  }
  return 0.0;
}

double log_marginal_density(const SubordinatorSpec& spec, double x) {
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  const double s = spec.time();
  switch (spec.family()) {
    case Family::Gamma: return (s - 1.0) * std::log(x) - x - std::lgamma(s);
    case Family::InverseGaussian: {
      const double nu = spec.rate();
      const double d = s - nu * x;
      return std::log(s) - 0.5 * std::log(2.0 * kPi) - 1.5 * std::log(x) - d * d / (2.0 * x);
    }
    case Family::Stable: {
      if (spec.index() != 0.5) {
        throw UnsupportedCase("closed-form stable density is only available for index 1/2");
      }
      const double k = s * spec.scale();
      return std::log(k / (2.0 * std::sqrt(kPi))) - 1.5 * std::log(x) - k * k / (4.0 * x);
    }
    case Family::CompoundPoisson:
      throw UnsupportedCase("compound-Poisson marginal is atomic");
    case Family::Drift: throw UnsupportedCase("drift marginal is a point mass");
  }
  return 0.0;
}

double marginal_density(const SubordinatorSpec& spec, double x) {
  if (!(x > 0.0)) return 0.0;
  return std::exp(log_marginal_density(spec, x));
}

double IncrementVector::sum() const noexcept {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

double draw_positive_stable(double alpha, Rng& rng) {
  const double u = kPi * rng.uniform();
  const double e = rng.exponential();
  const double a = std::sin(alpha * u) / std::pow(std::sin(u), 1.0 / alpha);
  const double b = std::pow(std::sin((1.0 - alpha) * u) / e, (1.0 - alpha) / alpha);
  return a * b;
}

double draw_inverse_gaussian(double mean, double shape, Rng& rng) {
  const double z = rng.normal();
  const double r = mean * z * z / (2.0 * shape);
  const double x = mean / (1.0 + r + std::sqrt(r * r + 2.0 * r));
  if (rng.uniform() * (mean + x) <= mean) return x;
  return mean * mean / x;
}

double draw_increment(const SubordinatorSpec& spec, double dt, Rng& rng) {
  switch (spec.family()) {
    case Family::Gamma: return rng.gamma(dt, 1.0);
    case Family::Stable: {
      const double a = spec.index();
      return std::pow(spec.scale() * dt, 1.0 / a) * draw_positive_stable(a, rng);
    }
    case Family::InverseGaussian: return draw_inverse_gaussian(dt / spec.rate(), dt * dt, rng);
    case Family::CompoundPoisson: {
      const double eta2 = spec.jump_sd() * spec.jump_sd();
      return eta2 * static_cast<double>(rng.poisson(spec.jump_rate() * dt));
    }
    case Family::Drift: return dt;
  }
  return 0.0;
}

IncrementVector sample_increments(const SubordinatorSpec& spec, std::size_t p, std::uint64_t seed,
                                  Interpretation as) {
  if (p == 0) throw PreconditionError("sample_increments requires p >= 1");
  if (as == Interpretation::log_variance || as == Interpretation::location) {
    throw PreconditionError("subordinator increments are nonnegative: use variance or precision");
  }
  IncrementVector out;
  out.grid_step = spec.time() / static_cast<double>(p);
  out.interpretation = as;
  out.values = kernels::subordinator_increments(spec, p, seed);
  return out;
}

IncrementVector sample_two_groups(double theta, double delta, double eta, std::size_t p,
                                  std::uint64_t seed) {
  require_positive(theta, "jump rate theta");
  require_positive(delta, "grid step delta");
  if (!(eta >= 0.0)) throw DomainError("jump sd eta must be nonnegative");
  if (p == 0) throw PreconditionError("sample_two_groups requires p >= 1");
  IncrementVector out;
  out.grid_step = delta;
  out.interpretation = Interpretation::location;
  out.values = kernels::two_groups_increments(theta, delta, eta, p, seed);
  return out;
}

double two_groups_exceedance_slope(double theta, double eta, double eps) {
  if (eta == 0.0) return 0.0;
  return theta * 2.0 * special::normal_sf(eps / eta);
}

std::vector<double> simulate_interlacing(const IncrementVector& signal, double noise_scale,
                                         std::uint64_t seed) {
  if (!(noise_scale >= 0.0)) throw DomainError("noise scale must be nonnegative");
  const double sd = noise_scale * std::sqrt(signal.grid_step);
  std::vector<double> y = kernels::gaussian_noise(signal.size(), seed);
  for (std::size_t j = 0; j < y.size(); ++j) y[j] = signal.values[j] + sd * y[j];
  return y;
}

}  // namespace levyshrink
