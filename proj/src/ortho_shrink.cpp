#include "levyshrink/ortho_shrink.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "levyshrink/errors.hpp"
#include "levyshrink/kernels.hpp"
#include "levyshrink/rng.hpp"

namespace levyshrink {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string to_string(Method method) {
  switch (method) {
    case Method::RR: return "rr";
    case Method::PCR: return "pcr";
    case Method::GPrior: return "gprior";
    case Method::PLS: return "pls";
    case Method::FullyBayes: return "bayes";
  }
  return "unknown";
}

SvdModel svd_orthogonalize(const MatrixXd& X, const VectorXd& y) {
  if (X.rows() < 2 || X.cols() < 1) throw PreconditionError("need n >= 2 rows and p >= 1 columns");
  if (X.rows() != y.size()) throw PreconditionError("design and response lengths differ");
  if (!X.allFinite() || !y.allFinite()) throw PreconditionError("design or response not finite");
  if (X.isZero(0.0)) throw PreconditionError("design matrix is identically zero");

  Eigen::BDCSVD<MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd& s = svd.singularValues();
  Index r = 0;
  while (r < s.size() && s(r) > 1e-10 * s(0)) ++r;

  SvdModel m;
  m.rank = r;
  m.n_obs = X.rows();
  m.d = s.head(r);
  m.U = svd.matrixU().leftCols(r);
  m.W = svd.matrixV().leftCols(r);
  for (Index j = 0; j < r; ++j) {
    Index at = 0;
    m.W.col(j).cwiseAbs().maxCoeff(&at);
    if (m.W(at, j) < 0.0) {
      m.W.col(j) *= -1.0;
      m.U.col(j) *= -1.0;
    }
  }
  const VectorXd uty = m.U.transpose() * y;
  m.alpha_hat = uty.cwiseQuotient(m.d);
  m.rss_perp = std::max(0.0, (y - m.U * uty).squaredNorm());
  return m;
}

ShrinkageProfile kappa_ridge(const SvdModel& model, double nu) {
  if (!(nu > 0.0)) throw DomainError("ridge nu must be positive");
  ShrinkageProfile out{Method::RR, nu, {}, false};
  const VectorXd d2 = model.d.array().square();
  out.kappa = d2.array() / (nu + d2.array());
  return out;
}

ShrinkageProfile kappa_pcr(const SvdModel& model, int K) {
  if (K < 1 || K > model.rank) throw PreconditionError("PCR needs 1 <= K <= rank");
  ShrinkageProfile out{Method::PCR, static_cast<double>(K), VectorXd::Zero(model.rank), false};
  out.kappa.head(K).setOnes();
  return out;
}

ShrinkageProfile kappa_gprior(const SvdModel& model, double g) {
  if (!(g > 0.0)) throw DomainError("g must be positive");
  return {Method::GPrior, g, VectorXd::Constant(model.rank, g / (1.0 + g)), false};
}

ShrinkageProfile kappa_pls(const SvdModel& model, int K) {
  if (K < 1 || K > model.rank) throw PreconditionError("PLS needs 1 <= K <= rank");
  // The K-component PLS fit minimizes sum_j w_j (1 - kappa_j)^2 over
  // polynomials kappa in d^2 of degree K without constant term, with
  // w_j = d_j^2 alpha_hat_j^2.  kappa is the w-weighted projection of the
  // ones vector onto span{x, ..., x^K}, x_j = (d_j / d_1)^2, built with an
  // orthonormal Arnoldi basis instead of monomials.
  const Index r = model.rank;
  const VectorXd x = (model.d / model.d(0)).array().square();
  const VectorXd w = (model.d.array() * model.alpha_hat.array()).square();
  auto dot = [&w](const VectorXd& u, const VectorXd& v) { return (w.array() * u.array() * v.array()).sum(); };

  ShrinkageProfile out{Method::PLS, static_cast<double>(K), VectorXd::Zero(r), false};
  const VectorXd ones = VectorXd::Ones(r);
  std::vector<VectorXd> basis;
  VectorXd v = x;
  for (int k = 0; k < K; ++k) {
    const double before = std::sqrt(dot(v, v));
    for (int pass = 0; pass < 2; ++pass) {
      for (const VectorXd& q : basis) v -= dot(q, v) * q;
    }
    const double norm = std::sqrt(dot(v, v));
    if (!(norm > 1e-10 * before) || norm == 0.0) {
      out.ill_conditioned = true;
      break;
    }
    v /= norm;
    out.kappa += dot(v, ones) * v;
    basis.push_back(v);
    v = x.cwiseProduct(v);
  }
  return out;
}

ShrinkageProfile kappa_weights(const SvdModel& model, Method method, double parameter) {
  switch (method) {
    case Method::RR: return kappa_ridge(model, parameter);
    case Method::PCR: return kappa_pcr(model, static_cast<int>(std::lround(parameter)));
    case Method::GPrior: return kappa_gprior(model, parameter);
    case Method::PLS: return kappa_pls(model, static_cast<int>(std::lround(parameter)));
    case Method::FullyBayes:
      throw PreconditionError("fully-Bayes weights come from gibbs_fit");
  }
  return {};
}

VectorXd reconstruct_beta(const SvdModel& model, const ShrinkageProfile& profile) {
  if (profile.kappa.size() != model.rank) throw PreconditionError("profile length != model rank");
  return model.W * profile.kappa.cwiseProduct(model.alpha_hat);
}

void GibbsConfig::validate() const {
  if (iterations < 1) throw PreconditionError("iterations must be >= 1");
  if (burn_in < 0 || burn_in >= iterations) throw PreconditionError("need 0 <= burn-in < iterations");
  if (thin < 1) throw PreconditionError("thinning must be >= 1");
  if (chains < 1) throw PreconditionError("need at least one chain");
  if (!(credible_level > 0.0 && credible_level < 1.0)) {
    throw PreconditionError("credible level must lie in (0,1)");
  }
  if (fixed_tau2 && !(*fixed_tau2 > 0.0)) throw DomainError("fixed tau^2 must be positive");
  if (fixed_sigma2 && !(*fixed_sigma2 > 0.0)) throw DomainError("fixed sigma^2 must be positive");
  if (fixed_lambda2 && (fixed_lambda2->array() <= 0.0).any()) {
    throw DomainError("fixed lambda^2 must be positive");
  }
}

namespace {

struct ChainDraws {
  MatrixXd kappa;  // draws x r
  MatrixXd alpha;
  VectorXd lambda2_sum;
  double tau2_sum = 0.0;
  double sigma2_sum = 0.0;
};

ChainDraws run_chain(const SvdModel& model, const GibbsConfig& cfg, std::uint64_t seed) {
  const Index r = model.rank;
  const VectorXd d2 = model.d.array().square();
  const VectorXd& ah = model.alpha_hat;
  const double n = static_cast<double>(model.n_obs);
  Rng rng(seed);

  VectorXd lambda2 = cfg.fixed_lambda2 ? *cfg.fixed_lambda2 : VectorXd::Ones(r);
  VectorXd xi = VectorXd::Ones(r);
  double tau2 = cfg.fixed_tau2.value_or(1.0);
  double zeta = 1.0;
  const double fit_ss = (d2.array() * ah.array().square()).sum();
  double sigma2 = cfg.fixed_sigma2.value_or(
      std::max(1e-8, model.n_obs > r ? model.rss_perp / (n - static_cast<double>(r))
                                     : 0.5 * fit_ss / n));
  VectorXd alpha = ah;
  VectorXd kappa(r);

  const int kept = (cfg.iterations - cfg.burn_in + cfg.thin - 1) / cfg.thin;
  ChainDraws out;
  out.kappa.resize(kept, r);
  out.alpha.resize(kept, r);
  out.lambda2_sum = VectorXd::Zero(r);
  int row = 0;

  for (int it = 0; it < cfg.iterations; ++it) {
    for (Index j = 0; j < r; ++j) {
      const double s = tau2 * lambda2(j) * d2(j);
      kappa(j) = s / (1.0 + s);
      alpha(j) = kappa(j) * ah(j) + std::sqrt(sigma2 * kappa(j) / d2(j)) * rng.normal();
    }
    if (!cfg.fixed_sigma2) {
      double ss = model.rss_perp;
      for (Index j = 0; j < r; ++j) {
        const double e = ah(j) - alpha(j);
        ss += d2(j) * e * e + alpha(j) * alpha(j) / (tau2 * lambda2(j));
      }
      sigma2 = rng.inv_gamma(0.5 * (n + static_cast<double>(r)), 0.5 * ss);
    }
    if (!cfg.fixed_lambda2) {
      for (Index j = 0; j < r; ++j) {
        lambda2(j) = rng.inv_gamma(1.0, 1.0 / xi(j) + alpha(j) * alpha(j) / (2.0 * sigma2 * tau2));
        xi(j) = rng.inv_gamma(1.0, 1.0 + 1.0 / lambda2(j));
      }
    }
    if (!cfg.fixed_tau2) {
      double ss = 0.0;
      for (Index j = 0; j < r; ++j) ss += alpha(j) * alpha(j) / lambda2(j);
      tau2 = rng.inv_gamma(0.5 * (static_cast<double>(r) + 1.0), 1.0 / zeta + ss / (2.0 * sigma2));
      zeta = rng.inv_gamma(1.0, 1.0 + 1.0 / tau2);
    }
    if (!std::isfinite(sigma2) || !std::isfinite(tau2) || !lambda2.allFinite() ||
        !alpha.allFinite()) {
      throw NumericError("non-finite Gibbs draw at sweep " + std::to_string(it), it);
    }
    if (it >= cfg.burn_in && (it - cfg.burn_in) % cfg.thin == 0) {
      out.kappa.row(row) = kappa.transpose();
      out.alpha.row(row) = alpha.transpose();
      out.lambda2_sum += lambda2;
      out.tau2_sum += tau2;
      out.sigma2_sum += sigma2;
      ++row;
    }
  }
  return out;
}

double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(v.size() - 1, lo + 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

ChainSummary gibbs_fit(const SvdModel& model, const GibbsConfig& config) {
  config.validate();
  const Index r = model.rank;
  if (r == 0) throw PreconditionError("model has rank 0");
  if (config.fixed_lambda2 && config.fixed_lambda2->size() != r) {
    throw PreconditionError("fixed lambda^2 needs one entry per component");
  }
  const auto chains = kernels::parallel_map<ChainDraws>(
      static_cast<std::size_t>(config.chains), [&](std::size_t c) {
        const std::uint64_t seed =
            config.chains == 1 ? config.seed : derive_seed(config.seed, c);
        return run_chain(model, config, seed);
      });

  Index total = 0;
  for (const auto& c : chains) total += c.kappa.rows();
  MatrixXd kappa(total, r);
  MatrixXd alpha(total, r);
  ChainSummary s;
  s.lambda2_mean = VectorXd::Zero(r);
  Index row = 0;
  for (const auto& c : chains) {
    kappa.middleRows(row, c.kappa.rows()) = c.kappa;
    alpha.middleRows(row, c.alpha.rows()) = c.alpha;
    row += c.kappa.rows();
    s.lambda2_mean += c.lambda2_sum;
    s.tau2_mean += c.tau2_sum;
    s.sigma2_mean += c.sigma2_sum;
  }
  const double nd = static_cast<double>(total);
  s.draws = static_cast<int>(total);
  s.kappa_mean = kappa.colwise().mean().transpose();
  s.alpha_mean = alpha.colwise().mean().transpose();
  s.m_mean = s.kappa_mean.cwiseProduct(model.alpha_hat);
  s.lambda2_mean /= nd;
  s.tau2_mean /= nd;
  s.sigma2_mean /= nd;
  s.kappa_lo.resize(r);
  s.kappa_hi.resize(r);
  const double tail = 0.5 * (1.0 - config.credible_level);
  std::vector<double> col(static_cast<std::size_t>(total));
  for (Index j = 0; j < r; ++j) {
    for (Index i = 0; i < total; ++i) col[static_cast<std::size_t>(i)] = kappa(i, j);
    std::sort(col.begin(), col.end());
    s.kappa_lo(j) = quantile_sorted(col, tail);
    s.kappa_hi(j) = quantile_sorted(col, 1.0 - tail);
  }
  if (config.keep_draws) {
    s.kappa_draws = std::move(kappa);
    s.alpha_draws = std::move(alpha);
  }
  return s;
}

VectorXd fb_beta_estimate(const SvdModel& model, const ChainSummary& summary) {
  if (summary.alpha_mean.size() != model.rank) throw PreconditionError("summary does not match model");
  return model.W * summary.alpha_mean;
}

}  // namespace levyshrink
