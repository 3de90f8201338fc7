#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

namespace levyshrink {

/// y = U D alpha + e with X = U D W' the thin SVD of the design.
struct SvdModel {
  Eigen::MatrixXd U;          // n x r
  Eigen::VectorXd d;          // r, descending
  Eigen::MatrixXd W;          // p x r
  Eigen::VectorXd alpha_hat;  // D^{-1} U'y
  Eigen::Index rank = 0;
  Eigen::Index n_obs = 0;
  /// ||y - U U'y||^2, the part of y outside the column space.
  double rss_perp = 0.0;
};

/// Thin SVD with singular values below 1e-10 d_1 dropped.  Each column of W
/// is signed so that its largest-magnitude entry is positive.
SvdModel svd_orthogonalize(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

enum class Method { RR, PCR, GPrior, PLS, FullyBayes };

std::string to_string(Method method);

struct ShrinkageProfile {
  Method method = Method::RR;
  double parameter = 0.0;  // nu, K, or g
  Eigen::VectorXd kappa;
  /// PLS only: the Krylov space had dimension below K, so fewer components were used.
  bool ill_conditioned = false;
};

/// kappa_j = d_j^2 / (nu + d_j^2).
ShrinkageProfile kappa_ridge(const SvdModel& model, double nu);
/// kappa_j = 1 for the first K components, 0 after.
ShrinkageProfile kappa_pcr(const SvdModel& model, int K);
/// kappa_j = g / (1 + g).
ShrinkageProfile kappa_gprior(const SvdModel& model, double g);
/// kappa_j = sum_{k=1..K} theta_k d_j^{2k}, theta the K-component PLS fit.
ShrinkageProfile kappa_pls(const SvdModel& model, int K);

/// Dispatch on method; `parameter` is nu, K or g.
ShrinkageProfile kappa_weights(const SvdModel& model, Method method, double parameter);

/// sum_j kappa_j alpha_hat_j w_j.
Eigen::VectorXd reconstruct_beta(const SvdModel& model, const ShrinkageProfile& profile);

struct GibbsConfig {
  int iterations = 10000;
  int burn_in = 2000;
  int thin = 1;
  std::uint64_t seed = 42;
  int chains = 1;
  double credible_level = 0.75;
  /// Hold parameters fixed instead of sampling them.
  std::optional<double> fixed_tau2;
  std::optional<Eigen::VectorXd> fixed_lambda2;
  std::optional<double> fixed_sigma2;
  bool keep_draws = false;

  void validate() const;
};

struct ChainSummary {
  Eigen::VectorXd kappa_mean;
  Eigen::VectorXd kappa_lo;
  Eigen::VectorXd kappa_hi;
  Eigen::VectorXd alpha_mean;
  /// Posterior mean of m_j = kappa_j alpha_hat_j.
  Eigen::VectorXd m_mean;
  Eigen::VectorXd lambda2_mean;
  double tau2_mean = 0.0;
  double sigma2_mean = 0.0;
  int draws = 0;
  /// Retained draws, one row per draw, when keep_draws is set.
  Eigen::MatrixXd kappa_draws;
  Eigen::MatrixXd alpha_draws;
};

/// Gibbs sampler for alpha_j ~ N(0, sigma^2 tau^2 lambda_j^2) with half-Cauchy
/// tau and lambda_j (inverse-gamma auxiliaries) and p(sigma^2) = 1/sigma^2.
/// Chains run concurrently and their draws are pooled in chain order.
ChainSummary gibbs_fit(const SvdModel& model, const GibbsConfig& config);

/// W times the posterior mean of alpha.
Eigen::VectorXd fb_beta_estimate(const SvdModel& model, const ChainSummary& summary);

}  // namespace levyshrink
