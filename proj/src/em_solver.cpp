#include "levyshrink/em_solver.hpp"

#include <cmath>

#include "levyshrink/errors.hpp"

namespace levyshrink {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void LinearProblem::validate() const {
  if (X.rows() != y.size()) throw PreconditionError("design and response lengths differ");
  if (X.rows() == 0 || X.cols() == 0) throw PreconditionError("empty design");
  if (!X.allFinite() || !y.allFinite()) throw PreconditionError("design or response not finite");
  if (!(noise_sd > 0.0)) throw DomainError("noise sd must be positive");
}

double penalized_objective(const LinearProblem& prob, const PenaltySpec& pen,
                           const VectorXd& beta) {
  const double s2 = prob.noise_sd * prob.noise_sd;
  double pen_sum = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) pen_sum += penalty_value(pen, beta(j));
  return (prob.y - prob.X * beta).squaredNorm() / (2.0 * s2) + pen_sum;
}

double stationarity_residual(const LinearProblem& prob, const PenaltySpec& pen,
                             const VectorXd& beta) {
  const double s2 = prob.noise_sd * prob.noise_sd;
  const VectorXd g = prob.X.transpose() * (prob.y - prob.X * beta) / s2;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (beta(j) == 0.0) {
      if (pen.transform == Transform::HalfSquare && !derivative_has_pole(pen.subordinator)) {
        worst = std::max(worst, std::abs(g(j)));
      } else if (pen.transform == Transform::Abs && !derivative_has_pole(pen.subordinator)) {
        worst = std::max(worst, std::abs(g(j)) - conditional_moment(pen, 0.0));
      }
      continue;
    }
    worst = std::max(worst, std::abs(g(j) - penalty_derivative(pen, beta(j))));
  }
  return worst;
}

VectorXd default_init(const LinearProblem& prob) {
  prob.validate();
  const MatrixXd& X = prob.X;
  if (X.rows() > X.cols()) {
    Eigen::JacobiSVD<MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& d = svd.singularValues();
    if (d(d.size() - 1) > 1e-8 * d(0)) return svd.solve(prob.y);
  }
  const double s2 = prob.noise_sd * prob.noise_sd;
  MatrixXd A = X.transpose() * X;
  A.diagonal().array() += s2;
  return A.llt().solve(X.transpose() * prob.y);
}

EmTrace em_ridge_mixture(const LinearProblem& prob, const PenaltySpec& pen,
                         std::optional<VectorXd> init, const EmOptions& options) {
  prob.validate();
  pen.validate();
  if (pen.transform != Transform::HalfSquare) {
    throw PreconditionError("mixture-of-ridge EM needs a HalfSquare penalty");
  }
  VectorXd beta = init ? *init : default_init(prob);
  if (beta.size() != prob.X.cols() || !beta.allFinite()) {
    throw PreconditionError("initial value must be finite with one entry per column");
  }
  const double s2 = prob.noise_sd * prob.noise_sd;
  const MatrixXd gram = prob.X.transpose() * prob.X;
  const VectorXd xty = prob.X.transpose() * prob.y;

  EmTrace trace;
  trace.iterates.push_back(beta);
  trace.objectives.push_back(penalized_objective(prob, pen, beta));
  for (int it = 0; it < options.max_iter; ++it) {
    MatrixXd A = gram;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
      A(j, j) += s2 * em_weight(pen, beta(j), options.weight_floor);
    }
    Eigen::LLT<MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) {
      throw NumericError("generalized ridge system is not positive definite", 0.0);
    }
    VectorXd next = llt.solve(xty);
    const double change = (next - beta).lpNorm<Eigen::Infinity>();
    beta = std::move(next);
    trace.iterates.push_back(beta);
    trace.objectives.push_back(penalized_objective(prob, pen, beta));
    trace.iterations = it + 1;
    if (change < options.tol) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

EmTrace em_lla(const LinearProblem& prob, const PenaltySpec& pen, std::optional<VectorXd> init,
               const EmOptions& options) {
  prob.validate();
  pen.validate();
  if (pen.transform != Transform::Abs) throw PreconditionError("LLA EM needs an Abs penalty");
  VectorXd beta = init ? *init : default_init(prob);
  if (beta.size() != prob.X.cols() || !beta.allFinite()) {
    throw PreconditionError("initial value must be finite with one entry per column");
  }
  const double s2 = prob.noise_sd * prob.noise_sd;

  EmTrace trace;
  trace.iterates.push_back(beta);
  trace.objectives.push_back(penalized_objective(prob, pen, beta));
  VectorXd w(beta.size());
  for (int it = 0; it < options.max_iter; ++it) {
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
      w(j) = s2 * em_weight(pen, beta(j), options.weight_floor);
    }
    VectorXd next = weighted_lasso_cd(prob, w, 1e-12, options.inner_max_iter, beta);
    for (Eigen::Index j = 0; j < next.size(); ++j) {
      if (std::abs(next(j)) < options.zero_threshold) next(j) = 0.0;
    }
    const double change = (next - beta).lpNorm<Eigen::Infinity>();
    beta = std::move(next);
    trace.iterates.push_back(beta);
    trace.objectives.push_back(penalized_objective(prob, pen, beta));
    trace.iterations = it + 1;
    if (change < options.tol) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

double weighted_lasso_kkt(const LinearProblem& prob, const VectorXd& weights, const VectorXd& beta) {
  const VectorXd g = prob.X.transpose() * (prob.y - prob.X * beta);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (beta(j) == 0.0) {
      worst = std::max(worst, std::abs(g(j)) - weights(j));
    } else {
      worst = std::max(worst, std::abs(g(j) - weights(j) * (beta(j) > 0.0 ? 1.0 : -1.0)));
    }
  }
  return worst;
}

namespace {

double soft(double z, double w) {
  if (z > w) return z - w;
  if (z < -w) return z + w;
  return 0.0;
}

}  // namespace

VectorXd weighted_lasso_cd(const LinearProblem& prob, const VectorXd& weights, double tol,
                           int max_iter, std::optional<VectorXd> init) {
  const MatrixXd& X = prob.X;
  const Eigen::Index p = X.cols();
  if (X.rows() != prob.y.size()) throw PreconditionError("design and response lengths differ");
  if (weights.size() != p) throw PreconditionError("one weight per column required");
  if ((weights.array() < 0.0).any()) throw PreconditionError("weights must be nonnegative");

  VectorXd beta = init ? *init : VectorXd::Zero(p);
  const VectorXd col_sq = X.colwise().squaredNorm();
  const double scale = std::max(1.0, (X.transpose() * prob.y).lpNorm<Eigen::Infinity>());
  VectorXd r = prob.y - X * beta;

  auto update = [&](Eigen::Index j) {
    if (col_sq(j) == 0.0) {
      beta(j) = 0.0;
      return 0.0;
    }
    const double old = beta(j);
    const double z = X.col(j).dot(r) + col_sq(j) * old;
    const double next = soft(z, weights(j)) / col_sq(j);
    if (next != old) {
      r.noalias() -= (next - old) * X.col(j);
      beta(j) = next;
    }
    return std::abs(next - old) * std::sqrt(col_sq(j));
  };

  int sweeps = 0;
  double kkt = 0.0;
  while (sweeps < max_iter) {
    for (Eigen::Index j = 0; j < p; ++j) update(j);
    ++sweeps;
    r = prob.y - X * beta;
    kkt = weighted_lasso_kkt(prob, weights, beta);
    if (kkt <= tol * scale) return beta;
    // Iterate on the active set until it settles, then re-check everything.
    while (sweeps < max_iter) {
      double moved = 0.0;
      for (Eigen::Index j = 0; j < p; ++j) {
        if (beta(j) != 0.0) moved = std::max(moved, update(j));
      }
      ++sweeps;
      if (moved <= 1e-3 * tol * scale) break;
    }
  }
  throw ConvergenceError("weighted lasso coordinate descent did not converge", kkt);
}

VectorXd weighted_lasso_active_set(const LinearProblem& prob, const VectorXd& weights, double tol,
                                   int max_iter) {
  const MatrixXd& X = prob.X;
  const Eigen::Index p = X.cols();
  if (X.rows() != prob.y.size()) throw PreconditionError("design and response lengths differ");
  if (weights.size() != p) throw PreconditionError("one weight per column required");
  if ((weights.array() < 0.0).any()) throw PreconditionError("weights must be nonnegative");

  const MatrixXd G = X.transpose() * X;
  const VectorXd c = X.transpose() * prob.y;
  const double scale = std::max(1.0, c.lpNorm<Eigen::Infinity>());
  auto objective = [&](const VectorXd& v) {
    return 0.5 * v.dot(G * v) - c.dot(v) + weights.dot(v.cwiseAbs());
  };

  // Feature-sign search: guess signs on an active set, solve the smooth
  // problem there, and line-search back to the first sign change.
  VectorXd x = VectorXd::Zero(p);
  VectorXd theta = VectorXd::Zero(p);
  double kkt = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const VectorXd grad = G * x - c;
    double active_gap = 0.0;
    Eigen::Index enter = -1;
    double enter_gap = tol * scale;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (x(j) != 0.0) {
        active_gap = std::max(active_gap, std::abs(grad(j) + weights(j) * theta(j)));
      } else if (std::abs(grad(j)) - weights(j) > enter_gap) {
        enter_gap = std::abs(grad(j)) - weights(j);
        enter = j;
      }
    }
    kkt = std::max(active_gap, enter_gap - tol * scale);
    if (active_gap <= tol * scale) {
      if (enter < 0) return x;
      theta(enter) = grad(enter) > 0.0 ? -1.0 : 1.0;
    }

    std::vector<Eigen::Index> act;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (theta(j) != 0.0) act.push_back(j);
    }
    const Eigen::Index k = static_cast<Eigen::Index>(act.size());
    MatrixXd Ga(k, k);
    VectorXd rhs(k);
    for (Eigen::Index a = 0; a < k; ++a) {
      rhs(a) = c(act[a]) - weights(act[a]) * theta(act[a]);
      for (Eigen::Index b = 0; b < k; ++b) Ga(a, b) = G(act[a], act[b]);
    }
    const VectorXd sol = Ga.completeOrthogonalDecomposition().solve(rhs);
    VectorXd target = x;
    for (Eigen::Index a = 0; a < k; ++a) target(act[a]) = sol(a);

    // candidates: the full step and every point where a coordinate crosses zero
    VectorXd best = target;
    double best_f = objective(target);
    for (Eigen::Index a = 0; a < k; ++a) {
      const Eigen::Index j = act[a];
      if (x(j) == 0.0 || (x(j) > 0.0) == (target(j) > 0.0)) continue;
      const double t = x(j) / (x(j) - target(j));
      VectorXd cand = x + t * (target - x);
      cand(j) = 0.0;
      const double f = objective(cand);
      if (f < best_f) {
        best_f = f;
        best = cand;
      }
    }
    if (best == x) break;
    x = best;
    for (Eigen::Index j = 0; j < p; ++j) theta(j) = x(j) > 0.0 ? 1.0 : (x(j) < 0.0 ? -1.0 : 0.0);
  }
  kkt = weighted_lasso_kkt(prob, weights, x);
  if (kkt <= 1e3 * tol * scale) return x;
  throw ConvergenceError("weighted lasso active-set search did not converge", kkt);
}

}  // namespace levyshrink
