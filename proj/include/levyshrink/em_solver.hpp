#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "levyshrink/penalty.hpp"

namespace levyshrink {

struct LinearProblem {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  double noise_sd = 1.0;

  void validate() const;
};

struct EmOptions {
  double tol = 1e-8;
  int max_iter = 500;
  int inner_max_iter = 10000;
  /// Floor on |beta| when the EM weight has a pole at zero.
  double weight_floor = 1e-8;
  /// Abs penalties: coordinates with |beta| below this are set to 0 between iterations.
  double zero_threshold = 1e-12;
};

struct EmTrace {
  std::vector<Eigen::VectorXd> iterates;
  std::vector<double> objectives;
  bool converged = false;
  int iterations = 0;

  const Eigen::VectorXd& beta() const { return iterates.back(); }
};

/// ||y - X beta||^2 / (2 sigma^2) + sum_j nu psi(f(beta_j)).
double penalized_objective(const LinearProblem& prob, const PenaltySpec& pen,
                           const Eigen::VectorXd& beta);

/// Largest violation of the first-order conditions of penalized_objective.
/// Zero coordinates of an Abs penalty are checked against the subgradient.
double stationarity_residual(const LinearProblem& prob, const PenaltySpec& pen,
                             const Eigen::VectorXd& beta);

/// OLS when n > p and X is well conditioned, otherwise ridge with unit penalty.
Eigen::VectorXd default_init(const LinearProblem& prob);

/// Mixture-of-ridge EM for HalfSquare penalties:
///   T_j = nu psi'(beta_j^2 / 2),  beta = (X'X + sigma^2 diag(T))^{-1} X'y.
EmTrace em_ridge_mixture(const LinearProblem& prob, const PenaltySpec& pen,
                         std::optional<Eigen::VectorXd> init = std::nullopt,
                         const EmOptions& options = {});

/// Reweighted-lasso EM for Abs penalties:
///   w_j = nu psi'(|beta_j|),  beta = argmin 1/2 ||y - X beta||^2 + sigma^2 sum_j w_j |beta_j|.
EmTrace em_lla(const LinearProblem& prob, const PenaltySpec& pen,
               std::optional<Eigen::VectorXd> init = std::nullopt, const EmOptions& options = {});

/// argmin 1/2 ||y - X beta||^2 + sum_j w_j |beta_j| by cyclic coordinate
/// descent with active-set sweeps.  Stops when the KKT residual is below
/// `tol`; throws ConvergenceError after max_iter sweeps.
Eigen::VectorXd weighted_lasso_cd(const LinearProblem& prob, const Eigen::VectorXd& weights,
                                  double tol = 1e-10, int max_iter = 10000,
                                  std::optional<Eigen::VectorXd> init = std::nullopt);

/// Same problem solved exactly by an active-set (feature-sign) search on the
/// Gram matrix.  Suited to moderate p and ill-conditioned designs where
/// coordinate descent is slow.  `tol` is relative to max(1, ||X'y||_inf).
Eigen::VectorXd weighted_lasso_active_set(const LinearProblem& prob, const Eigen::VectorXd& weights,
                                          double tol = 1e-12, int max_iter = 1000);

/// KKT residual of the weighted lasso at beta.
double weighted_lasso_kkt(const LinearProblem& prob, const Eigen::VectorXd& weights,
                          const Eigen::VectorXd& beta);

}  // namespace levyshrink
