#include "levyshrink/data_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include "levyshrink/csv.hpp"
#include "levyshrink/errors.hpp"
#include "levyshrink/rng.hpp"

namespace levyshrink {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

bool is_missing(const std::string& s) {
  std::string t;
  for (char c : s) {
    if (c != ' ' && c != '\t') t.push_back(static_cast<char>(std::tolower(c)));
  }
  return t.empty() || t == "na" || t == "nan" || t == "null";
}

double parse_number(const std::string& s, std::size_t line, std::size_t column) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  const char* first = s.data() + b;
  if (b < e && *first == '+') ++first;
  double v = 0.0;
  const auto res = std::from_chars(first, s.data() + e, v);
  if (res.ec != std::errc() || res.ptr != s.data() + e || !std::isfinite(v)) {
    throw ParseError("non-numeric value '" + s + "' in column " + std::to_string(column), line);
  }
  return v;
}

}  // namespace

Dataset load_table(const std::filesystem::path& path, const std::string& response) {
  const csv::Table t = csv::read_file(path);
  const std::size_t cols = t.header.size();
  if (cols < 2) throw ParseError("need at least one predictor and a response column", 1);
  if (t.rows.size() < 2) throw PreconditionError("need at least two data rows");
  std::size_t yc = cols - 1;
  if (!response.empty()) {
    const auto it = std::find(t.header.begin(), t.header.end(), response);
    if (it == t.header.end()) throw PreconditionError("response column '" + response + "' not found");
    yc = static_cast<std::size_t>(it - t.header.begin());
  }
  Dataset d;
  d.response_name = t.header[yc];
  for (std::size_t c = 0; c < cols; ++c) {
    if (c != yc) d.column_names.push_back(t.header[c]);
  }
  const Index n = static_cast<Index>(t.rows.size());
  d.X.resize(n, static_cast<Index>(cols - 1));
  d.y.resize(n);
  std::vector<Cell> missing;
  for (Index i = 0; i < n; ++i) {
    const auto& row = t.rows[static_cast<std::size_t>(i)];
    const std::size_t line = t.lines[static_cast<std::size_t>(i)];
    Index xc = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      double v = 0.0;
      if (is_missing(row[c])) {
        missing.push_back({line, c + 1});
      } else {
        v = parse_number(row[c], line, c + 1);
      }
      if (c == yc) {
        d.y(i) = v;
      } else {
        d.X(i, xc++) = v;
      }
    }
  }
  if (!missing.empty()) {
    std::string msg = "missing values at";
    for (std::size_t k = 0; k < std::min<std::size_t>(missing.size(), 10); ++k) {
      msg += " (line " + std::to_string(missing[k].row) + ", column " +
             std::to_string(missing[k].column) + ")";
    }
    if (missing.size() > 10) msg += " and " + std::to_string(missing.size() - 10) + " more";
    throw MissingValueError(msg, missing);
  }
  return d;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& response) {
  return standardize(load_table(path, response));
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write " + path.string());
  csv::Writer w(out);
  std::vector<std::string> header = data.column_names;
  header.push_back(data.response_name);
  w.row(header);
  std::vector<double> row(static_cast<std::size_t>(data.X.cols() + 1));
  for (Index i = 0; i < data.X.rows(); ++i) {
    for (Index j = 0; j < data.X.cols(); ++j) row[static_cast<std::size_t>(j)] = data.X(i, j);
    row.back() = data.y(i);
    w.row(row);
  }
}

Dataset standardize(const Dataset& raw) {
  const Index n = raw.X.rows();
  if (n < 2) throw PreconditionError("need at least two rows to standardize");
  Standardization s;
  std::vector<double> means;
  std::vector<double> scales;
  for (Index j = 0; j < raw.X.cols(); ++j) {
    const double m = raw.X.col(j).mean();
    const double sd = std::sqrt((raw.X.col(j).array() - m).square().sum() / static_cast<double>(n - 1));
    const std::string name = j < static_cast<Index>(raw.column_names.size())
                                 ? raw.column_names[static_cast<std::size_t>(j)]
                                 : "x" + std::to_string(j + 1);
    if (!(sd > 1e-12 * std::max(1.0, std::abs(m)))) {
      s.dropped.push_back(name);
      continue;
    }
    s.kept.push_back(j);
    means.push_back(m);
    scales.push_back(sd);
  }
  s.mean = Eigen::Map<VectorXd>(means.data(), static_cast<Index>(means.size()));
  s.scale = Eigen::Map<VectorXd>(scales.data(), static_cast<Index>(scales.size()));
  s.y_mean = raw.y.mean();

  Dataset out;
  out.X = apply_standardization(s, raw.X);
  out.y = raw.y.array() - s.y_mean;
  for (Index j : s.kept) {
    out.column_names.push_back(j < static_cast<Index>(raw.column_names.size())
                                   ? raw.column_names[static_cast<std::size_t>(j)]
                                   : "x" + std::to_string(j + 1));
  }
  out.response_name = raw.response_name;
  out.standardized = true;
  out.standardization = std::move(s);
  return out;
}

MatrixXd apply_standardization(const Standardization& s, const MatrixXd& X_raw) {
  MatrixXd out(X_raw.rows(), static_cast<Index>(s.kept.size()));
  for (std::size_t k = 0; k < s.kept.size(); ++k) {
    const Index kk = static_cast<Index>(k);
    out.col(kk) = (X_raw.col(s.kept[k]).array() - s.mean(kk)) / s.scale(kk);
  }
  return out;
}

void FactorModelSpec::validate() const {
  if (n < 2 || p < 1 || k < 1) throw PreconditionError("factor model needs n >= 2, p >= 1, k >= 1");
  if (k >= p) throw PreconditionError("factor model needs k < p");
  if (!(psi > 0.0)) throw DomainError("factor noise psi must be positive");
  if (!factor_sd.empty() && static_cast<int>(factor_sd.size()) != k) {
    throw PreconditionError("factor_sd needs one entry per factor");
  }
  if (response == FactorResponse::StrongComponent && (component < 1 || component > std::min(n, p))) {
    throw PreconditionError("strong component index outside 1..min(n, p)");
  }
}

FactorModelSpec holdout_factor_spec() {
  FactorModelSpec s;
  s.n = 50;
  s.p = 100;
  s.k = 20;
  s.psi = 0.01;
  s.loadings = Loadings::Gaussian;
  s.factor_sd.resize(static_cast<std::size_t>(s.k));
  for (int l = 0; l < s.k; ++l) s.factor_sd[static_cast<std::size_t>(l)] = std::pow(0.1, l / (s.k - 1.0));
  s.response = FactorResponse::LowestFactor;
  s.strength = 1.0;
  s.noise_sd = 1.0;
  return s;
}

FactorData gen_factor_model(const FactorModelSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  const Index n = spec.n;
  const Index p = spec.p;
  const Index k = spec.k;
  FactorData out;
  out.loadings.resize(p, k);
  for (Index i = 0; i < out.loadings.size(); ++i) {
    out.loadings.data()[i] = spec.loadings == Loadings::Ones ? 1.0 : rng.normal();
  }
  MatrixXd F(n, k);
  for (Index l = 0; l < k; ++l) {
    const double sd = spec.factor_sd.empty() ? 1.0 : spec.factor_sd[static_cast<std::size_t>(l)];
    for (Index i = 0; i < n; ++i) F(i, l) = sd * rng.normal();
  }
  MatrixXd X = F * out.loadings.transpose();
  for (Index i = 0; i < X.size(); ++i) X.data()[i] += spec.psi * rng.normal();

  VectorXd y(n);
  if (spec.response == FactorResponse::StrongComponent) {
    const SvdModel m = svd_orthogonalize(X, VectorXd::Zero(n));
    out.alpha.resize(m.rank);
    for (Index j = 0; j < m.rank; ++j) out.alpha(j) = spec.background_sd * rng.normal();
    out.alpha(spec.component - 1) = spec.strength;
    out.beta = m.W * out.alpha;
    y = X * out.beta;
  } else {
    const double sd = spec.factor_sd.empty() ? 1.0 : spec.factor_sd.back();
    y = spec.strength / sd * F.col(k - 1);
  }
  for (Index i = 0; i < n; ++i) y(i) += spec.noise_sd * rng.normal();

  out.data.X = std::move(X);
  out.data.y = std::move(y);
  for (Index j = 0; j < p; ++j) out.data.column_names.push_back("x" + std::to_string(j + 1));
  return out;
}

std::vector<int> assign_folds(std::size_t n, int folds, std::uint64_t seed) {
  if (folds < 1) throw PreconditionError("need at least one fold");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng.engine());
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) out[perm[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
  return out;
}

SplitPlan make_split(std::size_t n, double fraction, int folds, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw PreconditionError("fraction must lie in (0,1)");
  const std::size_t n_train = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n)));
  if (n_train < 2 || n_train >= n) throw PreconditionError("split leaves an empty side");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng.engine());
  SplitPlan plan;
  plan.fraction = fraction;
  plan.K = folds;
  plan.seed = seed;
  plan.train.assign(perm.begin(), perm.begin() + static_cast<long>(n_train));
  plan.test.assign(perm.begin() + static_cast<long>(n_train), perm.end());
  std::sort(plan.train.begin(), plan.train.end());
  std::sort(plan.test.begin(), plan.test.end());
  plan.folds = assign_folds(n_train, folds, derive_seed(seed, 1));
  return plan;
}

double sse(const VectorXd& pred, const VectorXd& truth) {
  if (pred.size() != truth.size()) throw PreconditionError("sse needs equal lengths");
  return (pred - truth).squaredNorm();
}

std::vector<double> default_grid(Method method, const MatrixXd& X) {
  std::vector<double> g;
  auto logspace = [&g](double lo, double hi, int count) {
    for (int i = 0; i < count; ++i) {
      g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
    }
  };
  switch (method) {
    case Method::RR: {
      const double s = X.squaredNorm() / static_cast<double>(X.cols());
      logspace(1e-4 * s, 1e4 * s, 30);
      break;
    }
    case Method::PCR:
    case Method::PLS: {
      const Index r = std::min(X.rows(), X.cols());
      for (Index K = 1; K <= r; ++K) g.push_back(static_cast<double>(K));
      break;
    }
    case Method::GPrior: logspace(1e-2, 1e4, 25); break;
    case Method::FullyBayes: throw PreconditionError("the fully-Bayes model has no tuning grid");
  }
  return g;
}

namespace {

struct FoldFit {
  SvdModel model;
  Standardization stats;
  MatrixXd X_test;
  VectorXd y_test;
};

FoldFit prepare(const MatrixXd& X_train, const VectorXd& y_train, const MatrixXd& X_test) {
  Dataset raw{X_train, y_train, {}, "y", false, {}};
  const Dataset std_train = standardize(raw);
  FoldFit f;
  f.stats = std_train.standardization;
  f.model = svd_orthogonalize(std_train.X, std_train.y);
  f.X_test = apply_standardization(f.stats, X_test);
  return f;
}

VectorXd predict(const FoldFit& f, const VectorXd& beta) {
  return (f.X_test * beta).array() + f.stats.y_mean;
}

// Order of increasing regularization strength: larger index = stronger.
double strength(Method m, double v) { return m == Method::RR ? v : -v; }

}  // namespace

CvResult cv_tune(const MatrixXd& X, const VectorXd& y, Method method,
                 const std::vector<double>& grid, const std::vector<int>& folds) {
  if (grid.empty()) throw PreconditionError("empty tuning grid");
  if (static_cast<Index>(folds.size()) != X.rows()) throw PreconditionError("one fold label per row");
  CvResult out;
  out.grid = grid;
  out.cv_error.assign(grid.size(), 0.0);
  const int K = *std::max_element(folds.begin(), folds.end()) + 1;
  int used = 0;
  for (int f = 0; f < K; ++f) {
    std::vector<Index> tr;
    std::vector<Index> te;
    for (Index i = 0; i < X.rows(); ++i) (folds[static_cast<std::size_t>(i)] == f ? te : tr).push_back(i);
    if (te.empty() || tr.size() < 2) continue;
    ++used;
    const FoldFit fit = prepare(X(tr, Eigen::all), y(tr), X(te, Eigen::all));
    const VectorXd yte = y(te);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      double err;
      if ((method == Method::PCR || method == Method::PLS) && grid[g] > fit.model.rank) {
        err = std::numeric_limits<double>::infinity();
      } else {
        const ShrinkageProfile prof = kappa_weights(fit.model, method, grid[g]);
        err = sse(predict(fit, reconstruct_beta(fit.model, prof)), yte);
      }
      out.cv_error[g] += err;
    }
  }
  if (used == 0) throw PreconditionError("no usable folds");
  for (double& e : out.cv_error) e /= used;

  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    const double a = out.cv_error[g];
    const double b = out.cv_error[best];
    const bool tie = std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
    if ((!tie && a < b) || (tie && strength(method, grid[g]) > strength(method, grid[best]))) {
      best = g;
    }
  }
  out.chosen = grid[best];
  return out;
}

VectorXd fit_predict(const MatrixXd& X_train, const VectorXd& y_train, const MatrixXd& X_test,
                     Method method, double parameter, const GibbsConfig& gibbs) {
  const FoldFit fit = prepare(X_train, y_train, X_test);
  VectorXd beta;
  if (method == Method::FullyBayes) {
    beta = fb_beta_estimate(fit.model, gibbs_fit(fit.model, gibbs));
  } else {
    beta = reconstruct_beta(fit.model, kappa_weights(fit.model, method, parameter));
  }
  return predict(fit, beta);
}

std::vector<double> HoldoutResult::mean_sse() const {
  std::vector<double> m(methods.size(), 0.0);
  for (const auto& rep : sse) {
    for (std::size_t k = 0; k < m.size(); ++k) m[k] += rep[k];
  }
  for (double& v : m) v /= static_cast<double>(sse.size());
  return m;
}

HoldoutResult run_holdout(const MatrixXd& X, const VectorXd& y, const HoldoutConfig& cfg,
                          kernels::Exec exec) {
  if (cfg.reps < 1) throw PreconditionError("need at least one split");
  HoldoutResult out;
  out.methods = cfg.methods;
  out.sse = kernels::parallel_map<std::vector<double>>(
      static_cast<std::size_t>(cfg.reps),
      [&](std::size_t rep) {
        const SplitPlan plan = make_split(static_cast<std::size_t>(X.rows()), cfg.fraction,
                                          cfg.folds, derive_seed(cfg.seed, rep));
        std::vector<Index> tr(plan.train.begin(), plan.train.end());
        std::vector<Index> te(plan.test.begin(), plan.test.end());
        const MatrixXd Xtr = X(tr, Eigen::all);
        const VectorXd ytr = y(tr);
        const MatrixXd Xte = X(te, Eigen::all);
        const VectorXd yte = y(te);
        std::vector<double> row;
        for (Method m : cfg.methods) {
          double param = 0.0;
          GibbsConfig g = cfg.gibbs;
          g.seed = derive_seed(plan.seed, 7);
          if (m != Method::FullyBayes) {
            const Dataset std_train = standardize(Dataset{Xtr, ytr, {}, "y", false, {}});
            param = cv_tune(Xtr, ytr, m, default_grid(m, std_train.X), plan.folds).chosen;
          }
          row.push_back(sse(fit_predict(Xtr, ytr, Xte, m, param, g), yte));
        }
        return row;
      },
      exec);
  return out;
}

}  // namespace levyshrink
