#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "levyshrink/kernels.hpp"
#include "levyshrink/ortho_shrink.hpp"

namespace levyshrink {

struct Standardization {
  Eigen::VectorXd mean;   // per retained column
  Eigen::VectorXd scale;  // per retained column (sample sd)
  std::vector<Eigen::Index> kept;
  std::vector<std::string> dropped;
  double y_mean = 0.0;
};

struct Dataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::string> column_names;
  std::string response_name = "y";
  bool standardized = false;
  Standardization standardization;
};

/// Read a numeric CSV with a header row; `response` names the y column (last
/// column when empty).  Missing cells are reported together; non-numeric
/// text is a parse error at its line.  Returns raw (unstandardized) data.
Dataset load_table(const std::filesystem::path& path, const std::string& response = "");

/// load_table followed by standardize.
Dataset load_csv(const std::filesystem::path& path, const std::string& response = "");

void write_csv(const std::filesystem::path& path, const Dataset& data);

/// Center and scale X (sample sd), center y; constant columns are dropped.
Dataset standardize(const Dataset& raw);

/// Apply stored training statistics to new rows of the raw design.
Eigen::MatrixXd apply_standardization(const Standardization& s, const Eigen::MatrixXd& X_raw);

enum class Loadings { Ones, Gaussian };
enum class FactorResponse { StrongComponent, LowestFactor };

/// x_i = B f_i + xi_i with f_i ~ N(0, diag(factor_sd^2)) and xi_i ~ N(0, psi^2 I).
///
/// StrongComponent: alpha_j ~ N(0, background_sd^2) in the SVD coordinates of
/// X except alpha_c = strength at 1-based component c; y = X W alpha + N(0, noise_sd^2).
/// LowestFactor: y = strength * f_k / factor_sd_k + N(0, noise_sd^2).
struct FactorModelSpec {
  int n = 100;
  int p = 20;
  int k = 5;
  double psi = 0.1;
  Loadings loadings = Loadings::Ones;
  std::vector<double> factor_sd;  // empty: all ones
  FactorResponse response = FactorResponse::StrongComponent;
  int component = 12;
  double strength = 12.0;
  double background_sd = 0.2;
  double noise_sd = 1.0;

  void validate() const;
};

/// Synthetic setting of the p > n holdout comparison: n = 50, p = 100,
/// y carried by the weakest of several factors with geometric variances.
FactorModelSpec holdout_factor_spec();

struct FactorData {
  Dataset data;             // raw
  Eigen::VectorXd beta;     // StrongComponent: W alpha
  Eigen::VectorXd alpha;    // StrongComponent: alpha in SVD coordinates of X
  Eigen::MatrixXd loadings; // p x k
};

FactorData gen_factor_model(const FactorModelSpec& spec, std::uint64_t seed);

/// Balanced fold labels 0..K-1 for n items (sizes differ by at most one).
std::vector<int> assign_folds(std::size_t n, int folds, std::uint64_t seed);

struct SplitPlan {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  double fraction = 0.75;
  int K = 10;
  std::vector<int> folds;  // one label per training index
  std::uint64_t seed = 0;
};

SplitPlan make_split(std::size_t n, double fraction, int folds, std::uint64_t seed);

double sse(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth);

/// Hyperparameter grid used when none is given: ridge nu log-spaced over
/// [1e-4, 1e4] * trace(X'X)/p, K = 1..r, g log-spaced over [1e-2, 1e4].
std::vector<double> default_grid(Method method, const Eigen::MatrixXd& X);

struct CvResult {
  double chosen = 0.0;
  std::vector<double> grid;
  std::vector<double> cv_error;  // mean held-out SSE per grid point
};

/// K-fold CV over `grid` for RR / PCR / PLS / GPrior.  Each fold standardizes
/// on its own training rows.  Ties go to the stronger regularization.
CvResult cv_tune(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Method method,
                 const std::vector<double>& grid, const std::vector<int>& folds);

/// Fit on (X_train, y_train) with train-only standardization and predict X_test.
Eigen::VectorXd fit_predict(const Eigen::MatrixXd& X_train, const Eigen::VectorXd& y_train,
                            const Eigen::MatrixXd& X_test, Method method, double parameter,
                            const GibbsConfig& gibbs = {});

struct HoldoutConfig {
  int reps = 50;
  double fraction = 0.75;
  int folds = 10;
  std::uint64_t seed = 42;
  GibbsConfig gibbs{4000, 1000, 1, 42, 1, 0.75, {}, {}, {}, false};
  std::vector<Method> methods{Method::FullyBayes, Method::PLS, Method::PCR, Method::RR};
};

struct HoldoutResult {
  std::vector<Method> methods;
  /// sse[rep][method]
  std::vector<std::vector<double>> sse;
  std::vector<double> mean_sse() const;
};

HoldoutResult run_holdout(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const HoldoutConfig& config,
                          kernels::Exec exec = kernels::Exec::parallel);

}  // namespace levyshrink
