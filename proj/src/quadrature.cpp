#include "levyshrink/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "levyshrink/errors.hpp"

namespace levyshrink {

namespace bq = boost::math::quadrature;

namespace {

// Integrators precompute abscissae; keep one per thread and refinement depth.
// Abscissae closer than 1e-150 to an endpoint are skipped: singular densities
// such as x^{-3/2} overflow there while the omitted mass is negligible.
bq::tanh_sinh<double>& tanh_sinh_rule(std::size_t levels) {
  thread_local std::vector<std::unique_ptr<bq::tanh_sinh<double>>> cache(32);
  levels = std::min<std::size_t>(levels, 31);
  if (!cache[levels]) cache[levels] = std::make_unique<bq::tanh_sinh<double>>(levels, 1e-150);
  return *cache[levels];
}

bq::exp_sinh<double>& exp_sinh_rule(std::size_t levels) {
  thread_local std::vector<std::unique_ptr<bq::exp_sinh<double>>> cache(32);
  levels = std::min<std::size_t>(levels, 31);
  if (!cache[levels]) cache[levels] = std::make_unique<bq::exp_sinh<double>>(levels);
  return *cache[levels];
}

bq::sinh_sinh<double>& sinh_sinh_rule(std::size_t levels) {
  thread_local std::vector<std::unique_ptr<bq::sinh_sinh<double>>> cache(32);
  levels = std::min<std::size_t>(levels, 31);
  if (!cache[levels]) cache[levels] = std::make_unique<bq::sinh_sinh<double>>(levels);
  return *cache[levels];
}

void check(const QuadResult& r, const QuadratureSettings& s) {
  if (!std::isfinite(r.value)) throw NumericError("quadrature produced a non-finite value", r.error);
  const double slack = std::sqrt(s.rel_tol) * std::max(r.l1, std::abs(r.value));
  if (r.error > slack && r.error > 1e-300) {
    throw NumericError("quadrature failed to converge (achieved " + std::to_string(r.error) + ")",
                       r.error);
  }
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, const QuadratureSettings& s) {
  if (a == b) return {};
  if (a > b) {
    QuadResult r = integrate(f, b, a, s);
    r.value = -r.value;
    return r;
  }
  QuadResult r;
  const bool a_inf = std::isinf(a);
  const bool b_inf = std::isinf(b);
  if (a_inf && b_inf) {
    r.value = sinh_sinh_rule(s.max_levels).integrate(f, s.rel_tol, &r.error, &r.l1);
  } else if (b_inf) {
    r.value = exp_sinh_rule(s.max_levels).integrate(f, a, b, s.rel_tol, &r.error, &r.l1);
  } else if (a_inf) {
    auto reflected = [&f](double x) { return f(-x); };
    r.value = exp_sinh_rule(s.max_levels).integrate(reflected, -b, kInf, s.rel_tol, &r.error, &r.l1);
  } else {
    r.value = tanh_sinh_rule(s.max_levels).integrate(f, a, b, s.rel_tol, &r.error, &r.l1);
  }
  check(r, s);
  return r;
}

QuadResult integrate_piecewise(const Integrand& f, double a, double b,
                               std::span<const double> breakpoints, const QuadratureSettings& s) {
  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin() + 1, cuts.end() - 1);
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  QuadResult total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const QuadResult piece = integrate(f, cuts[i], cuts[i + 1], s);
    total.value += piece.value;
    total.error += piece.error;
    total.l1 += piece.l1;
  }
  return total;
}

}  // namespace levyshrink
