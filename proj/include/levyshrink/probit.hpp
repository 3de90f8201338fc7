#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levyshrink/kernels.hpp"
#include "levyshrink/rng.hpp"

namespace levyshrink {

struct BinaryProblem {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;  // 0/1

  void validate() const;
};

struct RSpikeSpec {
  int p = 25;
  int n = 500;
  int r = 5;

  double magnitude() const;
  int covariance_df() const { return p + 2; }
  void validate() const;
};

struct RSpikeData {
  BinaryProblem problem;
  Eigen::VectorXd beta;
  Eigen::MatrixXd covariance;
  /// Seed actually used; differs from the requested one when a draw with a
  /// single class had to be redrawn.
  std::uint64_t seed_used = 0;
  bool resampled = false;
};

/// r-spike coefficients: r entries sqrt(p/r), the rest zero.
Eigen::VectorXd rspike_beta(const RSpikeSpec& spec);

/// Inverse-Wishart(df, I_p) by inverting a Bartlett-factor Wishart draw.
Eigen::MatrixXd draw_inverse_wishart_identity(int p, double df, Rng& rng);

/// Sigma ~ IW(p + 2, I), rows of X ~ N(0, Sigma), y = 1{N(X beta, 1) > 0}.
RSpikeData simulate_probit(int n, const Eigen::VectorXd& beta, std::uint64_t seed);
RSpikeData simulate_rspike(const RSpikeSpec& spec, std::uint64_t seed);

/// N(mean, 1) restricted to (0, inf) when `positive`, else (-inf, 0].
double draw_truncated_normal(double mean, bool positive, Rng& rng);

/// One draw of beta | z ~ N(A^{-1} X'z, A^{-1}), A = X'X + diag(1 / prior_var).
Eigen::VectorXd draw_beta_conditional(const Eigen::MatrixXd& X, const Eigen::VectorXd& z,
                                      const Eigen::VectorXd& prior_var, Rng& rng);

struct ProbitGibbsConfig {
  int iterations = 3000;
  int burn_in = 1000;
  std::uint64_t seed = 42;
  std::optional<double> fixed_tau2;
  std::optional<Eigen::VectorXd> fixed_lambda2;
};

struct ProbitGibbsResult {
  Eigen::VectorXd beta_mean;
  /// Count of latent draws whose sign disagreed with the label (always 0).
  long sign_violations = 0;
  int draws = 0;
};

/// Albert-Chib data augmentation with a horseshoe prior on beta.
ProbitGibbsResult probit_gibbs_hs(const BinaryProblem& prob, const ProbitGibbsConfig& config);

/// Probit MLE by IRLS.  Throws SeparationError when the iterates diverge.
Eigen::VectorXd probit_mle(const BinaryProblem& prob, double tol = 1e-8, int max_iter = 100);

/// Negative log-likelihood -sum log Phi(s_i x_i'beta), s_i = 2 y_i - 1.
double probit_nll(const BinaryProblem& prob, const Eigen::VectorXd& beta);

/// argmin probit_nll + nu ||beta||_1 by proximal Newton steps with backtracking.
Eigen::VectorXd probit_lasso(const BinaryProblem& prob, double nu, double tol = 1e-8,
                             int max_iter = 5000,
                             std::optional<Eigen::VectorXd> init = std::nullopt);

/// sqrt(2 log p).
double lasso_ct_nu(int p);

struct LassoCvResult {
  double nu = 0.0;
  std::vector<double> grid;
  std::vector<double> deviance;
  Eigen::VectorXd beta;
};

/// nu chosen from a log grid by K-fold cross-validated deviance; beta refit on all data.
LassoCvResult probit_lasso_cv(const BinaryProblem& prob, std::uint64_t seed, int grid_size = 20,
                              int folds = 10);

struct RSpikeReplicate {
  double sse_hs = 0.0;
  double sse_lasso_cv = 0.0;
  double sse_lasso_ct = 0.0;
  double sse_mle = 0.0;
  bool mle_separated = false;
};

struct MethodSummary {
  std::string method;
  double median_sse = 0.0;
  double mean_sse = 0.0;
};

/// Replicate r-spike experiments concurrently; replicate i uses derive_seed(seed, i).
std::vector<RSpikeReplicate> run_rspike_benchmark(const RSpikeSpec& spec, int reps,
                                                  std::uint64_t seed,
                                                  const ProbitGibbsConfig& gibbs = {},
                                                  kernels::Exec exec = kernels::Exec::parallel);

std::vector<MethodSummary> summarize_rspike(const std::vector<RSpikeReplicate>& reps);

}  // namespace levyshrink
