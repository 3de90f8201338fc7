#include <doctest.h>

#include <cmath>
#include <numbers>

#include "levyshrink/errors.hpp"
#include "levyshrink/posterior_mean.hpp"
#include "levyshrink/special.hpp"
#include "support.hpp"

using namespace levyshrink;
constexpr double kPi = std::numbers::pi;

namespace {

PenaltySpec sq(SubordinatorSpec s, double nu) { return {s, Transform::HalfSquare, nu}; }

// Posterior mean under the Laplace prior (nu/2) e^{-nu |beta|}.
double laplace_mean(double y, double nu, double sigma) {
  const double l1 = -nu * y + std::log(special::normal_cdf(y / sigma - nu * sigma));
  const double l2 = nu * y + std::log(special::normal_cdf(-y / sigma - nu * sigma));
  const double m = std::max(l1, l2);
  const double w1 = std::exp(l1 - m);
  const double w2 = std::exp(l2 - m);
  return y - nu * sigma * sigma * (w1 - w2) / (w1 + w2);
}

// Posterior mean by direct beta-domain quadrature of an unnormalized prior.
template <class Prior>
double beta_domain_mean(double y, double sigma, Prior prior) {
  auto w = [&](double b) {
    const double g = std::exp(-0.5 * (y - b) * (y - b) / (sigma * sigma));
    return g == 0.0 ? 0.0 : g * prior(b);
  };
  auto bw = [&](double b) { return b * w(b); };
  const std::initializer_list<double> cuts{y - 12 * sigma, 0.0, y, y + 12 * sigma};
  return integrate_piecewise(bw, -kInf, kInf, cuts, {1e-13, 15}).value /
         integrate_piecewise(w, -kInf, kInf, cuts, {1e-13, 15}).value;
}

const std::vector<double> kYs{0.0, 0.5, -0.5, 2.0, -2.0, 5.0, -5.0, 10.0, -10.0};

}  // namespace

TEST_CASE("Normal prior: all three routes equal the ridge mean") {
  for (double sigma : {0.5, 1.0}) {
    const MeansProblem prob(sq(SubordinatorSpec::drift(), 2.0), sigma);
    for (double y : kYs) {
      const double exact = y / (1.0 + sigma * sigma * 2.0);
      CHECK(std::abs(prob.posterior_mean_ps(y) - exact) < 1e-7 * (1 + std::abs(y)));
      CHECK(std::abs(prob.posterior_mean_levy(y) - exact) < 1e-7 * (1 + std::abs(y)));
      CHECK(std::abs(prob.posterior_mean_oracle(y) - exact) < 1e-9 * (1 + std::abs(y)));
    }
  }
}

TEST_CASE("Laplace prior: routes equal the closed-form mean") {
  for (double nu : {0.5, 1.5}) {
    const MeansProblem prob(sq(SubordinatorSpec::lasso(), nu), 1.0);
    CHECK(prob.levy_supported());
    for (double y : kYs) {
      const double exact = laplace_mean(y, nu, 1.0);
      INFO("nu=" << nu << " y=" << y);
      CHECK(std::abs(prob.posterior_mean_ps(y) - exact) < 1e-7 * (1 + std::abs(y)));
      CHECK(std::abs(prob.posterior_mean_levy(y) - exact) < 1e-7 * (1 + std::abs(y)));
      CHECK(std::abs(prob.posterior_mean_oracle(y) - exact) < 1e-9 * (1 + std::abs(y)));
    }
  }
}

TEST_CASE("Normal-gamma prior: routes equal beta-domain quadrature") {
  const double nu = 3.0;
  const MeansProblem prob(sq(SubordinatorSpec::gamma(), nu), 1.0);
  auto prior = [nu](double b) { return std::pow(1.0 + b * b / 2.0, -nu); };
  for (double y : kYs) {
    const double exact = beta_domain_mean(y, 1.0, prior);
    INFO("y=" << y);
    CHECK(std::abs(prob.posterior_mean_ps(y) - exact) < 1e-7 * (1 + std::abs(y)));
    CHECK(std::abs(prob.posterior_mean_levy(y) - exact) < 1e-7 * (1 + std::abs(y)));
  }
}

TEST_CASE("Inverse-Gaussian prior agrees across routes") {
  const MeansProblem prob(sq(SubordinatorSpec::inverse_gaussian(1.0), 2.0), 0.8);
  for (double y : {0.3, -1.7, 6.0}) {
    const double o = prob.posterior_mean_oracle(y);
    CHECK(std::abs(prob.posterior_mean_ps(y) - o) < 1e-7 * (1 + std::abs(y)));
    CHECK(std::abs(prob.posterior_mean_levy(y) - o) < 1e-7 * (1 + std::abs(y)));
  }
}

TEST_CASE("Horseshoe: the size-biased route is unavailable, the others agree") {
  const MeansProblem hs = MeansProblem::horseshoe(1.0, 1.0);
  CHECK_FALSE(hs.levy_supported());
  CHECK_THROWS_AS(hs.posterior_mean_levy(1.0), IntegrabilityError);
  // horseshoe prior density: int N(beta | 0, lambda^2) C+(lambda) d lambda; with
  // v = beta^2 / (2 lambda^2) this is int e^{-v} / (v + beta^2/2) dv / (pi sqrt(2 pi)).
  auto prior = [](double b) {
    // integrated over w = log(v / c), where the integrand is smooth with a plateau on (0, -log c)
    const double c = 0.5 * b * b;
    if (c == 0.0) return kInf;
    auto f = [c](double w) { return std::exp(w - c * std::exp(w)) / (std::exp(w) + 1.0); };
    const double top = -std::log(c);
    return (integrate(f, -kInf, 0.0, {1e-13, 15}).value + integrate(f, 0.0, top, {1e-13, 15}).value +
            integrate(f, top, kInf, {1e-13, 15}).value) /
           (kPi * std::sqrt(2 * kPi));
  };
  for (double y : {0.5, -2.0, 5.0}) {
    const double exact = beta_domain_mean(y, 1.0, prior);
    CHECK(std::abs(hs.posterior_mean_ps(y) - exact) < 1e-6 * (1 + std::abs(y)));
    CHECK(std::abs(hs.posterior_mean_oracle(y) - exact) < 1e-6 * (1 + std::abs(y)));
  }
  const auto curve = mean_curve(hs, {0.0, 1.0});
  CHECK(std::isnan(curve[1].mean_levy));
  CHECK(hs.prior_density(1.0) == doctest::Approx(prior(1.0)).epsilon(1e-8));
}

TEST_CASE("Normal-gamma with nu <= 3/2 has no finite E[1/T]") {
  const MeansProblem prob(sq(SubordinatorSpec::gamma(), 1.0), 1.0);
  CHECK_FALSE(prob.levy_supported());
  CHECK_THROWS_AS(prob.posterior_mean_levy(1.0), IntegrabilityError);
  CHECK(std::isfinite(prob.posterior_mean_ps(1.0)));
}

TEST_CASE("Marginal densities are proper; means shrink and are odd") {
  const MeansProblem prob(sq(SubordinatorSpec::lasso(), 1.0), 1.0);
  const double total = integrate_piecewise([&](double y) { return prob.marginal_density(y); }, -kInf,
                                           kInf, {0.0})
                           .value;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
  const double tb = integrate_piecewise([&](double y) { return prob.marginal_density(y, true); }, -kInf,
                                        kInf, {0.0})
                        .value;
  CHECK(tb == doctest::Approx(1.0).epsilon(1e-8));
  for (double y : {0.3, 2.0, 8.0}) {
    CHECK(std::abs(prob.posterior_mean_ps(y)) < y);
    CHECK(prob.posterior_mean_ps(-y) == doctest::Approx(-prob.posterior_mean_ps(y)).epsilon(1e-9));
  }
}

TEST_CASE("Serial and parallel mean curves agree; bad inputs are rejected") {
  const MeansProblem prob(sq(SubordinatorSpec::gamma(), 3.0), 1.0);
  const std::vector<double> ys{-3.0, 0.0, 1.0, 4.0};
  const auto a = mean_curve(prob, ys, kernels::Exec::serial);
  const auto b = mean_curve(prob, ys, kernels::Exec::parallel);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    CHECK(a[i].mean_ps == b[i].mean_ps);
    CHECK(a[i].mean_levy == b[i].mean_levy);
  }
  CHECK_THROWS_AS(MeansProblem({SubordinatorSpec::gamma(), Transform::Abs, 1.0}, 1.0), PreconditionError);
  CHECK_THROWS_AS(MeansProblem(sq(SubordinatorSpec::gamma(), 1.0), 0.0), DomainError);
}
