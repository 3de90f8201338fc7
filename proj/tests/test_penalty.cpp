#include <doctest.h>

#include <cmath>
#include <numbers>

#include "levyshrink/errors.hpp"
#include "levyshrink/penalty.hpp"
#include "levyshrink/quadrature.hpp"
#include "support.hpp"

using namespace levyshrink;
using testsupport::rel_err;
constexpr double kPi = std::numbers::pi;

namespace {

PenaltySpec sq(SubordinatorSpec s, double nu) { return {s, Transform::HalfSquare, nu}; }
PenaltySpec ab(SubordinatorSpec s, double nu) { return {s, Transform::Abs, nu}; }

// E[T | beta] with p(T | beta) proportional to exp(-T f) p_nu(T), by quadrature.
double moment_oracle(const SubordinatorSpec& s, double nu, double f) {
  const SubordinatorSpec clock = s.with_time(nu);
  auto w = [&](double t) { return std::exp(-t * f) * marginal_density(clock, t); };
  auto tw = [&](double t) { return t * w(t); };
  const QuadratureSettings q{1e-12, 15};
  return integrate_piecewise(tw, 0.0, kInf, {1e-2, 1.0}, q).value /
         integrate_piecewise(w, 0.0, kInf, {1e-2, 1.0}, q).value;
}

}  // namespace

TEST_CASE("Penalty values") {
  CHECK(penalty_value(sq(SubordinatorSpec::gamma(), 2.0), 1.0) == doctest::Approx(2.0 * std::log(1.5)));
  CHECK(penalty_value(sq(SubordinatorSpec::lasso(), 3.0), -0.7) == doctest::Approx(2.1));
  CHECK(penalty_value(ab(SubordinatorSpec::stable(0.5), 1.0), 4.0) == doctest::Approx(2.0));
  CHECK(penalty_value(sq(SubordinatorSpec::drift(), 2.0), 3.0) == doctest::Approx(9.0));
  CHECK(penalty_value(sq(SubordinatorSpec::gamma(), 2.0), 0.0) == 0.0);
  CHECK_THROWS_AS(penalty_value(sq(SubordinatorSpec::gamma(), 0.0), 1.0), DomainError);
}

TEST_CASE("Conditional moment E[T | beta] matches the quadrature oracle") {
  for (const auto& s : {SubordinatorSpec::gamma(), SubordinatorSpec::lasso(),
                        SubordinatorSpec::inverse_gaussian(0.8)}) {
    for (double nu : {0.7, 2.0}) {
      for (double b : {0.3, 1.0, 4.0}) {
        INFO(s.describe() << " nu=" << nu << " beta=" << b);
        CHECK(rel_err(conditional_moment(sq(s, nu), b), moment_oracle(s, nu, b * b / 2.0)) < 1e-8);
        CHECK(rel_err(conditional_moment(ab(s, nu), b), moment_oracle(s, nu, b)) < 1e-8);
      }
    }
  }
}

TEST_CASE("Penalty derivative matches central differences") {
  for (const auto& pen : {sq(SubordinatorSpec::gamma(), 1.5), ab(SubordinatorSpec::gamma(), 1.5),
                          sq(SubordinatorSpec::stable(0.3), 1.0), ab(SubordinatorSpec::inverse_gaussian(2.0), 0.5),
                          sq(SubordinatorSpec::compound_poisson(2.0, 0.7), 1.0)}) {
    for (double b : {-2.0, -0.4, 0.1, 1.3}) {
      const double h = 1e-6;
      const double fd = (penalty_value(pen, b + h) - penalty_value(pen, b - h)) / (2.0 * h);
      INFO(pen.describe() << " beta=" << b);
      CHECK(rel_err(penalty_derivative(pen, b), fd) < 1e-6);
    }
  }
}

TEST_CASE("Poles and kinks at zero") {
  try {
    conditional_moment(sq(SubordinatorSpec::stable(0.3), 1.0), 0.0);
    FAIL("expected PoleError");
  } catch (const PoleError& e) {
    CHECK(e.exponent() == doctest::Approx(-1.4));
  }
  try {
    conditional_moment(ab(SubordinatorSpec::stable(0.3), 1.0), 0.0);
    FAIL("expected PoleError");
  } catch (const PoleError& e) {
    CHECK(e.exponent() == doctest::Approx(-0.7));
  }
  CHECK_THROWS_AS(penalty_derivative(ab(SubordinatorSpec::gamma(), 1.0), 0.0), PoleError);
  CHECK_THROWS_AS(penalty_derivative(sq(SubordinatorSpec::stable(0.3), 1.0), 0.0), PoleError);
  CHECK_THROWS_AS(penalty_derivative(sq(SubordinatorSpec::lasso(), 1.0), 0.0), PoleError);
  CHECK(penalty_derivative(sq(SubordinatorSpec::stable(0.8), 1.0), 0.0) == 0.0);
  CHECK(penalty_derivative(sq(SubordinatorSpec::gamma(), 1.0), 0.0) == 0.0);
}

TEST_CASE("EM weight floors |beta|") {
  const auto pen = sq(SubordinatorSpec::lasso(), 1.0);
  CHECK(em_weight(pen, 0.0) == doctest::Approx(conditional_moment(pen, 1e-8)));
  CHECK(em_weight(pen, -0.5) == doctest::Approx(conditional_moment(pen, 0.5)));
  CHECK(std::isfinite(em_weight(pen, 0.0)));
  // lasso weight is nu / |beta|
  CHECK(em_weight(pen, 0.25) == doctest::Approx(4.0));
}

TEST_CASE("Lasso as an inverse-Gaussian precision mixture") {
  for (double nu : {0.5, 1.0, 3.0}) {
    for (double b = -5.0; b <= 5.0; b += 0.25) {
      auto f = [&](double t) {
        return nu / std::sqrt(2.0 * kPi) * std::exp(-t * b * b / 2.0 - nu * nu / (2.0 * t) - 1.5 * std::log(t));
      };
      const double mix = integrate_piecewise(f, 0.0, kInf, {1e-2, 1.0, 1e2}, {1e-13, 15}).value;
      CHECK(std::abs(mix - std::exp(-penalty_value(sq(SubordinatorSpec::lasso(), nu), b))) < 1e-10);
    }
  }
}

TEST_CASE("Normalized priors") {
  const PriorDensity lasso(sq(SubordinatorSpec::lasso(), 2.0));
  CHECK(lasso.log_normalizer() == doctest::Approx(std::log(1.0)).epsilon(1e-12));
  const PriorDensity normal(sq(SubordinatorSpec::drift(), 4.0));
  CHECK(normal.log_normalizer() == doctest::Approx(0.5 * std::log(4.0 / (2.0 * kPi))).epsilon(1e-12));
  // (1 + beta^2/2)^{-1} integrates to pi sqrt 2
  const PriorDensity cauchy(sq(SubordinatorSpec::gamma(), 1.0));
  CHECK(cauchy.log_normalizer() == doctest::Approx(-std::log(kPi * std::numbers::sqrt2)).epsilon(1e-10));

  const PriorDensity ig(ab(SubordinatorSpec::inverse_gaussian(1.0), 1.3));
  const double total = integrate_piecewise([&](double b) { return ig.density(b); }, -kInf, kInf, {0.0}).value;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(prior_log_density(sq(SubordinatorSpec::drift(), 1.0), 0.0) ==
        doctest::Approx(-0.5 * std::log(2.0 * kPi)));

  CHECK_THROWS_AS(PriorDensity(sq(SubordinatorSpec::gamma(), 0.5)), IntegrabilityError);
  CHECK_THROWS_AS(PriorDensity(sq(SubordinatorSpec::compound_poisson(1.0, 1.0), 1.0)), IntegrabilityError);
}

TEST_CASE("Subordinated mixture penalty") {
  const MixturePenaltySpec m{SubordinatorSpec::gamma(), sq(SubordinatorSpec::lasso(), 1.0)};
  const std::vector<double> beta{1.0, -2.0, 0.5};
  CHECK(mixture_penalty(m, beta) == doctest::Approx(std::log1p(3.5)));
}
