#include "levyshrink/probit.hpp"

#include <algorithm>
#include <cmath>

#include "levyshrink/data_io.hpp"
#include "levyshrink/em_solver.hpp"
#include "levyshrink/errors.hpp"
#include "levyshrink/special.hpp"

namespace levyshrink {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void BinaryProblem::validate() const {
  if (X.rows() != y.size()) throw PreconditionError("design and labels lengths differ");
  if (X.rows() == 0 || X.cols() == 0) throw PreconditionError("empty design");
  bool zero = false;
  bool one = false;
  for (Index i = 0; i < y.size(); ++i) {
    if (y(i) == 0.0) {
      zero = true;
    } else if (y(i) == 1.0) {
      one = true;
    } else {
      throw PreconditionError("labels must be 0 or 1");
    }
  }
  if (!zero || !one) throw PreconditionError("labels must contain both classes");
}

double RSpikeSpec::magnitude() const { return std::sqrt(static_cast<double>(p) / r); }

void RSpikeSpec::validate() const {
  if (p < 1 || n < 2) throw PreconditionError("r-spike needs p >= 1 and n >= 2");
  if (r < 1 || r > p) throw PreconditionError("r-spike needs 1 <= r <= p");
}

VectorXd rspike_beta(const RSpikeSpec& spec) {
  spec.validate();
  VectorXd beta = VectorXd::Zero(spec.p);
  beta.head(spec.r).setConstant(spec.magnitude());
  return beta;
}

MatrixXd draw_inverse_wishart_identity(int p, double df, Rng& rng) {
  if (!(df > p - 1)) throw DomainError("Wishart degrees of freedom must exceed p - 1");
  MatrixXd L = MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    L(i, i) = std::sqrt(2.0 * rng.gamma(0.5 * (df - i)));
    for (int j = 0; j < i; ++j) L(i, j) = rng.normal();
  }
  // W = L L' ~ Wishart(df, I); return W^{-1} = L'^{-1} L^{-1}.
  const MatrixXd Linv = L.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(p, p));
  return Linv.transpose() * Linv;
}

RSpikeData simulate_probit(int n, const VectorXd& beta, std::uint64_t seed) {
  const int p = static_cast<int>(beta.size());
  if (n < 2 || p < 1) throw PreconditionError("need n >= 2 and p >= 1");
  RSpikeData out;
  out.beta = beta;
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t s = seed + attempt;
    Rng rng(s);
    out.covariance = draw_inverse_wishart_identity(p, p + 2.0, rng);
    const MatrixXd chol = out.covariance.llt().matrixL();
    MatrixXd G(n, p);
    for (Index i = 0; i < G.size(); ++i) G.data()[i] = rng.normal();
    out.problem.X = G * chol.transpose();
    const VectorXd eta = out.problem.X * beta;
    out.problem.y.resize(n);
    for (int i = 0; i < n; ++i) out.problem.y(i) = eta(i) + rng.normal() > 0.0 ? 1.0 : 0.0;
    const double ones = out.problem.y.sum();
    if (ones > 0.0 && ones < n) {
      out.seed_used = s;
      out.resampled = attempt > 0;
      return out;
    }
  }
}

RSpikeData simulate_rspike(const RSpikeSpec& spec, std::uint64_t seed) {
  return simulate_probit(spec.n, rspike_beta(spec), seed);
}

namespace {

// e ~ N(0,1) conditioned on e > a.
double normal_tail(double a, Rng& rng) {
  if (a < 8.0) {
    const double tail = special::normal_sf(a);
    const double e = -special::normal_quantile(rng.uniform() * tail);
    return std::max(e, std::nextafter(a, INFINITY));
  }
  // Robert (1995) exponential rejection for the far tail.
  const double rate = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double z = a + rng.exponential() / rate;
    const double d = z - rate;
    if (rng.uniform() <= std::exp(-0.5 * d * d)) return z;
  }
}

}  // namespace

double draw_truncated_normal(double mean, bool positive, Rng& rng) {
  if (positive) {
    const double z = mean + normal_tail(-mean, rng);
    return z > 0.0 ? z : std::numeric_limits<double>::min();
  }
  const double z = mean - normal_tail(mean, rng);
  return std::min(z, 0.0);
}

VectorXd draw_beta_conditional(const MatrixXd& X, const VectorXd& z, const VectorXd& prior_var,
                               Rng& rng) {
  MatrixXd A = X.transpose() * X;
  A.diagonal() += prior_var.cwiseInverse();
  Eigen::LLT<MatrixXd> llt(A);
  VectorXd e(X.cols());
  for (Index j = 0; j < e.size(); ++j) e(j) = rng.normal();
  const VectorXd mean = llt.solve(X.transpose() * z);
  return mean + llt.matrixU().solve(e);
}

ProbitGibbsResult probit_gibbs_hs(const BinaryProblem& prob, const ProbitGibbsConfig& cfg) {
  prob.validate();
  if (cfg.iterations < 1 || cfg.burn_in < 0 || cfg.burn_in >= cfg.iterations) {
    throw PreconditionError("need 0 <= burn-in < iterations");
  }
  const Index n = prob.X.rows();
  const Index p = prob.X.cols();
  if (cfg.fixed_lambda2 && cfg.fixed_lambda2->size() != p) {
    throw PreconditionError("fixed lambda^2 needs one entry per coefficient");
  }
  Rng rng(cfg.seed);
  const MatrixXd gram = prob.X.transpose() * prob.X;
  VectorXd beta = VectorXd::Zero(p);
  VectorXd z(n);
  VectorXd lambda2 = cfg.fixed_lambda2 ? *cfg.fixed_lambda2 : VectorXd::Ones(p);
  VectorXd xi = VectorXd::Ones(p);
  double tau2 = cfg.fixed_tau2.value_or(1.0);
  double zeta = 1.0;

  ProbitGibbsResult out;
  out.beta_mean = VectorXd::Zero(p);
  VectorXd e(p);
  for (int it = 0; it < cfg.iterations; ++it) {
    const VectorXd eta = prob.X * beta;
    for (Index i = 0; i < n; ++i) {
      const bool positive = prob.y(i) == 1.0;
      z(i) = draw_truncated_normal(eta(i), positive, rng);
      if ((z(i) > 0.0) != positive) ++out.sign_violations;
    }
    MatrixXd A = gram;
    for (Index j = 0; j < p; ++j) A(j, j) += 1.0 / (tau2 * lambda2(j));
    Eigen::LLT<MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) {
      throw NumericError("beta conditional is not positive definite at sweep " + std::to_string(it),
                         it);
    }
    for (Index j = 0; j < p; ++j) e(j) = rng.normal();
    beta = llt.solve(prob.X.transpose() * z) + llt.matrixU().solve(e);

    if (!cfg.fixed_lambda2) {
      for (Index j = 0; j < p; ++j) {
        lambda2(j) = rng.inv_gamma(1.0, 1.0 / xi(j) + beta(j) * beta(j) / (2.0 * tau2));
        xi(j) = rng.inv_gamma(1.0, 1.0 + 1.0 / lambda2(j));
      }
    }
    if (!cfg.fixed_tau2) {
      const double ss = (beta.array().square() / lambda2.array()).sum();
      tau2 = rng.inv_gamma(0.5 * (static_cast<double>(p) + 1.0), 1.0 / zeta + 0.5 * ss);
      zeta = rng.inv_gamma(1.0, 1.0 + 1.0 / tau2);
    }
    if (!beta.allFinite() || !std::isfinite(tau2) || !lambda2.allFinite()) {
      throw NumericError("non-finite draw at sweep " + std::to_string(it), it);
    }
    if (it >= cfg.burn_in) {
      out.beta_mean += beta;
      ++out.draws;
    }
  }
  out.beta_mean /= out.draws;
  return out;
}

double probit_nll(const BinaryProblem& prob, const VectorXd& beta) {
  const VectorXd eta = prob.X * beta;
  double nll = 0.0;
  for (Index i = 0; i < eta.size(); ++i) {
    const double s = prob.y(i) == 1.0 ? 1.0 : -1.0;
    nll -= std::log(special::normal_cdf(s * eta(i)));
  }
  return nll;
}

namespace {

// phi(x) / Phi(x), stable for very negative x.
double mills_inverse(double x) {
  if (x > -30.0) return special::normal_pdf(x) / special::normal_cdf(x);
  // asymptotic: -x / (1 - 1/x^2 + 3/x^4)
  const double x2 = x * x;
  return -x / (1.0 - 1.0 / x2 + 3.0 / (x2 * x2));
}

// Gradient of probit_nll with respect to the linear predictor.
VectorXd nll_eta_gradient(const BinaryProblem& prob, const VectorXd& eta) {
  VectorXd g(eta.size());
  for (Index i = 0; i < eta.size(); ++i) {
    const double s = prob.y(i) == 1.0 ? 1.0 : -1.0;
    g(i) = -s * mills_inverse(s * eta(i));
  }
  return g;
}

}  // namespace

VectorXd probit_mle(const BinaryProblem& prob, double tol, int max_iter) {
  prob.validate();
  const Index n = prob.X.rows();
  const Index p = prob.X.cols();
  VectorXd beta = VectorXd::Zero(p);
  VectorXd w(n);
  VectorXd work(n);
  for (int it = 0; it < max_iter; ++it) {
    const VectorXd eta = prob.X * beta;
    for (Index i = 0; i < n; ++i) {
      const double pdf = special::normal_pdf(eta(i));
      const double cdf = special::normal_cdf(eta(i));
      const double sf = special::normal_sf(eta(i));
      const double var = std::max(cdf * sf, 1e-300);
      w(i) = std::max(pdf * pdf / var, 1e-300);
      // working response eta + (y - mu) / mu'(eta), written to avoid cancellation
      const double resid = prob.y(i) == 1.0 ? sf : -cdf;
      work(i) = eta(i) + (pdf > 0.0 ? resid / pdf : 0.0);
    }
    const MatrixXd A = prob.X.transpose() * w.asDiagonal() * prob.X;
    const VectorXd next = A.ldlt().solve(prob.X.transpose() * w.cwiseProduct(work));
    if (!next.allFinite() || next.lpNorm<Eigen::Infinity>() > 1e4) {
      const VectorXd dir = beta.norm() > 0.0 ? VectorXd(beta / beta.norm()) : beta;
      throw SeparationError("probit likelihood has no finite maximizer (separated data)",
                            std::vector<double>(dir.data(), dir.data() + dir.size()),
                            std::vector<double>(beta.data(), beta.data() + beta.size()));
    }
    const double change = (next - beta).lpNorm<Eigen::Infinity>();
    beta = next;
    if (change < tol) return beta;
  }
  const VectorXd dir = beta / std::max(beta.norm(), 1e-300);
  throw SeparationError("probit IRLS did not converge; data are likely separated",
                        std::vector<double>(dir.data(), dir.data() + dir.size()),
                        std::vector<double>(beta.data(), beta.data() + beta.size()));
}

VectorXd probit_lasso(const BinaryProblem& prob, double nu, double tol, int max_iter,
                      std::optional<VectorXd> init) {
  if (!(nu > 0.0)) throw DomainError("lasso nu must be positive");
  const Index n = prob.X.rows();
  const Index p = prob.X.cols();
  VectorXd beta = init ? *init : VectorXd::Zero(p);
  const VectorXd weights = VectorXd::Constant(p, nu);
  auto objective = [&](const VectorXd& b) { return probit_nll(prob, b) + nu * b.lpNorm<1>(); };
  double f = objective(beta);
  VectorXd h(n);
  for (int it = 0; it < max_iter; ++it) {
    const VectorXd eta = prob.X * beta;
    const VectorXd g = nll_eta_gradient(prob, eta);
    for (Index i = 0; i < n; ++i) {
      const double u = (prob.y(i) == 1.0 ? 1.0 : -1.0) * eta(i);
      const double r = mills_inverse(u);
      h(i) = std::max(r * (u + r), 1e-10);
    }
    // weighted lasso on the quadratic model 1/2 sum h_i (z_i - x_i'b)^2, z = eta - g / h
    const VectorXd root = h.cwiseSqrt();
    const LinearProblem model{root.asDiagonal() * prob.X, root.cwiseProduct(eta - g.cwiseQuotient(h)), 1.0};
    const VectorXd target = weighted_lasso_active_set(model, weights);
    const VectorXd d = target - beta;
    const double slope = (prob.X.transpose() * g).dot(d) + nu * (target.lpNorm<1>() - beta.lpNorm<1>());
    double t = 1.0;
    VectorXd next = target;
    double f_next = objective(next);
    while (f_next > f + 0.25 * t * slope && t > 1e-10) {
      t *= 0.5;
      next = beta + t * d;
      f_next = objective(next);
    }
    const double change = (next - beta).lpNorm<Eigen::Infinity>();
    if (f_next <= f) {
      beta = std::move(next);
      f = f_next;
    }
    if (change < tol) return beta;
  }
  throw ConvergenceError("lasso-probit proximal Newton did not converge", 0.0);
}

double lasso_ct_nu(int p) { return std::sqrt(2.0 * std::log(static_cast<double>(p))); }

LassoCvResult probit_lasso_cv(const BinaryProblem& prob, std::uint64_t seed, int grid_size,
                              int folds) {
  prob.validate();
  if (grid_size < 1 || folds < 2) throw PreconditionError("need a grid and >= 2 folds");
  const Index n = prob.X.rows();
  const Index p = prob.X.cols();
  VectorXd s(n);
  for (Index i = 0; i < n; ++i) s(i) = prob.y(i) == 1.0 ? 1.0 : -1.0;
  const double nu_max = 2.0 * special::normal_pdf(0.0) * (prob.X.transpose() * s).lpNorm<Eigen::Infinity>();

  LassoCvResult out;
  for (int g = 0; g < grid_size; ++g) {
    const double frac = grid_size == 1 ? 0.0 : static_cast<double>(g) / (grid_size - 1);
    out.grid.push_back(nu_max * std::pow(1e-3, frac));
  }
  out.deviance.assign(out.grid.size(), 0.0);
  const std::vector<int> fold = assign_folds(static_cast<std::size_t>(n), folds, seed);
  for (int f = 0; f < folds; ++f) {
    std::vector<Index> tr;
    std::vector<Index> te;
    for (Index i = 0; i < n; ++i) (fold[static_cast<std::size_t>(i)] == f ? te : tr).push_back(i);
    BinaryProblem train{prob.X(tr, Eigen::all), prob.y(tr)};
    BinaryProblem test{prob.X(te, Eigen::all), prob.y(te)};
    VectorXd warm = VectorXd::Zero(p);
    for (std::size_t g = 0; g < out.grid.size(); ++g) {
      warm = probit_lasso(train, out.grid[g], 1e-8, 5000, warm);
      out.deviance[g] += 2.0 * probit_nll(test, warm);
    }
  }
  std::size_t best = 0;
  for (std::size_t g = 1; g < out.grid.size(); ++g) {
    if (out.deviance[g] < out.deviance[best]) best = g;
  }
  out.nu = out.grid[best];
  out.beta = probit_lasso(prob, out.nu);
  return out;
}

std::vector<RSpikeReplicate> run_rspike_benchmark(const RSpikeSpec& spec, int reps,
                                                  std::uint64_t seed,
                                                  const ProbitGibbsConfig& gibbs,
                                                  kernels::Exec exec) {
  spec.validate();
  if (reps < 1) throw PreconditionError("need at least one replication");
  return kernels::parallel_map<RSpikeReplicate>(
      static_cast<std::size_t>(reps),
      [&](std::size_t i) {
        const RSpikeData data = simulate_rspike(spec, derive_seed(seed, i));
        const BinaryProblem& prob = data.problem;
        RSpikeReplicate rep;
        ProbitGibbsConfig cfg = gibbs;
        cfg.seed = derive_seed(data.seed_used, 1);
        rep.sse_hs = (probit_gibbs_hs(prob, cfg).beta_mean - data.beta).squaredNorm();
        rep.sse_lasso_cv =
            (probit_lasso_cv(prob, derive_seed(data.seed_used, 2)).beta - data.beta).squaredNorm();
        rep.sse_lasso_ct = (probit_lasso(prob, lasso_ct_nu(spec.p)) - data.beta).squaredNorm();
        try {
          rep.sse_mle = (probit_mle(prob) - data.beta).squaredNorm();
        } catch (const SeparationError& e) {
          const auto& last = e.last_iterate();
          rep.sse_mle = (Eigen::Map<const VectorXd>(last.data(), static_cast<Index>(last.size())) -
                         data.beta)
                            .squaredNorm();
          rep.mle_separated = true;
        }
        return rep;
      },
      exec);
}

namespace {

MethodSummary summarize(const std::string& name, std::vector<double> v) {
  MethodSummary s{name, 0.0, 0.0};
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  s.median_sse = m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
  for (double x : v) s.mean_sse += x;
  s.mean_sse /= static_cast<double>(m);
  return s;
}

}  // namespace

std::vector<MethodSummary> summarize_rspike(const std::vector<RSpikeReplicate>& reps) {
  std::vector<double> hs, cv, ct, mle;
  for (const auto& r : reps) {
    hs.push_back(r.sse_hs);
    cv.push_back(r.sse_lasso_cv);
    ct.push_back(r.sse_lasso_ct);
    mle.push_back(r.sse_mle);
  }
  return {summarize("horseshoe", hs), summarize("lasso-cv", cv), summarize("lasso-ct", ct),
          summarize("mle", mle)};
}

}  // namespace levyshrink
