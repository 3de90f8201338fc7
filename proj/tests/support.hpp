#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace testsupport {

// Asymptotic Kolmogorov tail P(K > lambda).
inline double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

struct Ks {
  double d = 0.0;
  double p_value = 1.0;
};

inline Ks ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_q((sn + 0.12 + 0.11 / sn) * d)};
}

inline Ks ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_q((ne + 0.12 + 0.11 / ne) * d)};
}

// Independent NIPALS PLS1 (no centering), returning the coefficient vector.
inline Eigen::VectorXd nipals_pls(Eigen::MatrixXd X, Eigen::VectorXd y, int K) {
  const Eigen::MatrixXd X0 = X;
  const int p = static_cast<int>(X.cols());
  Eigen::MatrixXd Wm(p, K);
  Eigen::MatrixXd P(p, K);
  Eigen::VectorXd q(K);
  for (int k = 0; k < K; ++k) {
    Eigen::VectorXd w = X.transpose() * y;
    w.normalize();
    const Eigen::VectorXd t = X * w;
    const double tt = t.squaredNorm();
    const Eigen::VectorXd pk = X.transpose() * t / tt;
    q(k) = y.dot(t) / tt;
    X -= t * pk.transpose();
    y -= q(k) * t;
    Wm.col(k) = w;
    P.col(k) = pk;
  }
  return Wm * (P.transpose() * Wm).inverse() * q;
}


inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testsupport
