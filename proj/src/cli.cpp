#include "levyshrink/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "levyshrink/csv.hpp"
#include "levyshrink/data_io.hpp"
#include "levyshrink/em_solver.hpp"
#include "levyshrink/errors.hpp"
#include "levyshrink/levy_core.hpp"
#include "levyshrink/meixner.hpp"
#include "levyshrink/ortho_shrink.hpp"
#include "levyshrink/penalty.hpp"
#include "levyshrink/posterior_mean.hpp"
#include "levyshrink/probit.hpp"
#include "levyshrink/svg.hpp"

namespace levyshrink::cli {

namespace fs = std::filesystem;
using Eigen::Index;

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ':')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(piece, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != piece.size() || !std::isfinite(v)) {
      throw PreconditionError("grid '" + text + "': '" + piece + "' is not a number");
    }
    parts.push_back(v);
  }
  if (parts.size() != 3) throw PreconditionError("grid must look like lo:hi:step");
  const double lo = parts[0];
  const double hi = parts[1];
  const double step = parts[2];
  if (!(step > 0.0) || hi < lo) throw PreconditionError("grid needs lo <= hi and step > 0");
  const double span = (hi - lo) / step;
  const auto count = static_cast<long long>(std::floor(span + 1e-12 * std::max(1.0, span))) + 1;
  if (count > 10'000'000) throw PreconditionError("grid has too many points");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo + static_cast<double>(i) * step;
  return out;
}

namespace {

struct Context {
  fs::path out;
  std::uint64_t seed = 42;
  bool plot = false;
};

struct FamilyArgs {
  std::string family = "gamma";
  double index = 0.5;
  double scale = 1.0;
  double rate = 1.0;
  double theta = 1.0;
  double eta = 1.0;
  double time = 1.0;

  void add_to(CLI::App* app) {
    app->add_option("--family", family, "gamma | stable | lasso | ig | cp | drift")
        ->check(CLI::IsMember({"gamma", "stable", "lasso", "ig", "cp", "drift"}));
    app->add_option("--index", index, "stable index alpha");
    app->add_option("--scale", scale, "stable scale");
    app->add_option("--rate", rate, "inverse-Gaussian rate");
    app->add_option("--theta", theta, "compound-Poisson jump rate");
    app->add_option("--eta", eta, "compound-Poisson jump sd");
  }

  SubordinatorSpec spec() const {
    if (family == "gamma") return SubordinatorSpec::gamma(time);
    if (family == "stable") return SubordinatorSpec::stable(index, scale, time);
    if (family == "lasso") return SubordinatorSpec::lasso(time);
    if (family == "ig") return SubordinatorSpec::inverse_gaussian(rate, time);
    if (family == "cp") return SubordinatorSpec::compound_poisson(theta, eta, time);
    return SubordinatorSpec::drift(time);
  }
};

Transform parse_transform(const std::string& s) {
  return s == "abs" ? Transform::Abs : Transform::HalfSquare;
}

Method parse_method(const std::string& s) {
  if (s == "rr") return Method::RR;
  if (s == "pcr") return Method::PCR;
  if (s == "pls") return Method::PLS;
  if (s == "gprior") return Method::GPrior;
  return Method::FullyBayes;
}

const auto kGridCheck = CLI::Validator(
    [](std::string& s) -> std::string {
      try {
        parse_grid(s);
      } catch (const std::exception& e) {
        return e.what();
      }
      return {};
    },
    "lo:hi:step", "grid");

void write_table(const Context& ctx, const std::string& name, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
  std::ofstream f(ctx.out / name, std::ios::binary);
  if (!f) throw PreconditionError("cannot write " + (ctx.out / name).string());
  csv::Writer w(f);
  w.row(header);
  for (const auto& r : rows) w.row(r);
}

void write_named(const Context& ctx, const std::string& name, const std::vector<std::string>& header,
                 const std::vector<std::string>& names, const std::vector<std::vector<double>>& rows) {
  std::ofstream f(ctx.out / name, std::ios::binary);
  if (!f) throw PreconditionError("cannot write " + (ctx.out / name).string());
  csv::Writer w(f);
  w.row(header);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::string> fields{names[i]};
    for (double v : rows[i]) fields.push_back(csv::format(v));
    w.row(fields);
  }
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// ---- subcommand bodies -----------------------------------------------------

struct PenaltyEval {
  FamilyArgs fam;
  std::string transform = "sq";
  double nu = 1.0;
  std::string grid = "-3:3:0.1";

  void run(const Context& ctx) const {
    const PenaltySpec pen{fam.spec(), parse_transform(transform), nu};
    pen.validate();
    std::optional<PriorDensity> prior;
    try {
      prior.emplace(pen);
    } catch (const IntegrabilityError& e) {
      std::cerr << "warning: " << e.what() << "; log_density left as nan\n";
    }
    std::vector<std::vector<double>> rows;
    for (double b : parse_grid(grid)) {
      const double ld = prior ? prior->log_density(b) : std::nan("");
      rows.push_back({b, penalty_value(pen, b), em_weight(pen, b), ld});
    }
    write_table(ctx, "penalty.csv", {"beta", "penalty", "weight", "log_density"}, rows);
  }
};

struct MeanCurveCmd {
  FamilyArgs fam;
  std::string transform = "sq";
  double nu = 1.0;
  double sigma = 1.0;
  double ymax = 10.0;
  int n = 101;
  bool horseshoe = false;
  double tau = 1.0;

  void run(const Context& ctx) const {
    if (n < 2) throw PreconditionError("--n must be at least 2");
    const MeansProblem prob =
        horseshoe ? MeansProblem::horseshoe(sigma, tau)
                  : MeansProblem(PenaltySpec{fam.spec(), parse_transform(transform), nu}, sigma);
    std::vector<double> ys(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ys[static_cast<std::size_t>(i)] = -ymax + 2.0 * ymax * i / (n - 1);
    const auto curve = mean_curve(prob, ys);
    std::vector<std::vector<double>> rows;
    for (const auto& pt : curve) rows.push_back({pt.y, pt.mean_ps, pt.mean_levy, pt.mean_oracle});
    write_table(ctx, "mean_curve.csv", {"y", "mean_ps", "mean_levy", "mean_oracle"}, rows);
    if (ctx.plot) {
      svg::Plot plot("Posterior mean", "y", "E(beta | y)");
      svg::Series ident{"y", {-ymax, ymax}, {-ymax, ymax}, "#999999", true, false, true};
      svg::Series mean{"posterior mean", {}, {}, "#1f77b4", true, false, false};
      for (const auto& pt : curve) {
        mean.x.push_back(pt.y);
        mean.y.push_back(pt.mean_oracle);
      }
      plot.add(ident);
      plot.add(mean);
      plot.write(ctx.out / "mean_curve.svg");
    }
  }
};

struct FitEm {
  FamilyArgs fam;
  std::string transform = "sq";
  double nu = 1.0;
  double sigma = 1.0;
  std::string data;
  std::string response;
  double tol = 1e-8;
  int max_iter = 500;

  void run(const Context& ctx) const {
    const Dataset d = load_csv(data, response);
    const LinearProblem prob{d.X, d.y, sigma};
    const PenaltySpec pen{fam.spec(), parse_transform(transform), nu};
    EmOptions opt;
    opt.tol = tol;
    opt.max_iter = max_iter;
    const EmTrace trace = pen.transform == Transform::HalfSquare
                              ? em_ridge_mixture(prob, pen, std::nullopt, opt)
                              : em_lla(prob, pen, std::nullopt, opt);
    std::vector<std::vector<double>> coef;
    for (Index j = 0; j < trace.beta().size(); ++j) coef.push_back({trace.beta()(j)});
    write_named(ctx, "coefficients.csv", {"name", "beta"}, d.column_names, coef);
    std::vector<std::vector<double>> tr;
    for (std::size_t i = 0; i < trace.objectives.size(); ++i) {
      tr.push_back({static_cast<double>(i), trace.objectives[i]});
    }
    write_table(ctx, "trace.csv", {"iter", "objective"}, tr);
    if (!trace.converged) std::cerr << "warning: EM stopped at the iteration limit\n";
  }
};

struct FitOrtho {
  std::string method = "bayes";
  std::string data;
  std::string response;
  std::optional<double> nu;
  std::optional<int> K;
  std::optional<double> g;
  int iters = 10000;
  int burn = 2000;
  int folds = 10;
  double level = 0.75;

  void run(const Context& ctx) const {
    const Method m = parse_method(method);
    const Dataset raw = load_table(data, response);
    const Dataset d = standardize(raw);
    const SvdModel model = svd_orthogonalize(d.X, d.y);
    Eigen::VectorXd kappa;
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
    Eigen::VectorXd beta;
    if (m == Method::FullyBayes) {
      GibbsConfig cfg;
      cfg.iterations = iters;
      cfg.burn_in = burn;
      cfg.seed = ctx.seed;
      cfg.credible_level = level;
      const ChainSummary s = gibbs_fit(model, cfg);
      kappa = s.kappa_mean;
      lo = s.kappa_lo;
      hi = s.kappa_hi;
      beta = fb_beta_estimate(model, s);
    } else {
      std::optional<double> param;
      if (m == Method::RR) param = nu;
      if (m == Method::PCR || m == Method::PLS) {
        if (K) param = static_cast<double>(*K);
      }
      if (m == Method::GPrior) param = g;
      if (!param) {
        const auto labels = assign_folds(static_cast<std::size_t>(raw.X.rows()), folds, ctx.seed);
        param = cv_tune(raw.X, raw.y, m, default_grid(m, d.X), labels).chosen;
        std::cerr << "cross-validated " << to_string(m) << " parameter: " << *param << "\n";
      }
      const ShrinkageProfile prof = kappa_weights(model, m, *param);
      kappa = lo = hi = prof.kappa;
      beta = reconstruct_beta(model, prof);
    }
    std::vector<std::vector<double>> coef;
    for (Index j = 0; j < beta.size(); ++j) coef.push_back({beta(j)});
    write_named(ctx, "coefficients.csv", {"name", "beta"}, d.column_names, coef);
    std::vector<std::vector<double>> prof;
    for (Index j = 0; j < kappa.size(); ++j) {
      prof.push_back({static_cast<double>(j + 1), model.d(j), kappa(j), lo(j), hi(j)});
    }
    write_table(ctx, "kappa.csv", {"component", "d", "kappa", "lo75", "hi75"}, prof);
    if (ctx.plot) {
      svg::Plot plot("Shrinkage by component (" + to_string(m) + ")", "component", "kappa");
      svg::Series s{"kappa", {}, {}, "#1f77b4", false, true, false};
      svg::Intervals iv;
      for (Index j = 0; j < kappa.size(); ++j) {
        s.x.push_back(static_cast<double>(j + 1));
        s.y.push_back(kappa(j));
        iv.x.push_back(static_cast<double>(j + 1));
        iv.lo.push_back(lo(j));
        iv.hi.push_back(hi(j));
      }
      plot.add(iv);
      plot.add(s);
      plot.write(ctx.out / "kappa.svg");
    }
  }
};

struct SimIncrements {
  FamilyArgs fam;
  std::size_t p = 1000;
  double time = 1.0;
  double a = 0.5;
  double b = 0.5;
  double delta = 0.5;
  std::size_t terms = 32;

  void run(const Context& ctx) const {
    IncrementVector inc;
    if (fam.family == "meixner") {
      MeixnerZParams z;
      z.a = a;
      z.b = b;
      z.delta = delta;
      inc = sample_meixner_increments(z, p, ctx.seed, terms);
    } else {
      FamilyArgs f = fam;
      f.time = time;
      inc = sample_increments(f.spec(), p, ctx.seed);
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j < inc.size(); ++j) rows.push_back({static_cast<double>(j + 1), inc.values[j]});
    write_table(ctx, "increments.csv", {"index", "increment"}, rows);
  }
};

struct SimTwoGroups {
  double theta = 1.0;
  double delta = 0.01;
  double eta = 3.0;
  double sigma = 1.0;
  std::size_t p = 1000;

  void run(const Context& ctx) const {
    const IncrementVector z = sample_two_groups(theta, delta, eta, p, ctx.seed);
    const auto y = simulate_interlacing(z, sigma, derive_seed(ctx.seed, 1));
    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j < z.size(); ++j) rows.push_back({static_cast<double>(j + 1), z.values[j], y[j]});
    write_table(ctx, "two_groups.csv", {"index", "beta", "y"}, rows);
  }
};

void write_design(const Context& ctx, const std::string& name, const Eigen::MatrixXd& X,
                  const Eigen::VectorXd& y) {
  std::vector<std::string> header;
  for (Index j = 0; j < X.cols(); ++j) header.push_back("x" + std::to_string(j + 1));
  header.push_back("y");
  std::vector<std::vector<double>> rows;
  for (Index i = 0; i < X.rows(); ++i) {
    std::vector<double> r;
    for (Index j = 0; j < X.cols(); ++j) r.push_back(X(i, j));
    r.push_back(y(i));
    rows.push_back(std::move(r));
  }
  write_table(ctx, name, header, rows);
}

void write_vector(const Context& ctx, const std::string& name, const Eigen::VectorXd& v) {
  std::vector<std::vector<double>> rows;
  for (Index j = 0; j < v.size(); ++j) rows.push_back({static_cast<double>(j + 1), v(j)});
  write_table(ctx, name, {"index", "beta"}, rows);
}

struct SimRSpike {
  RSpikeSpec spec;

  void run(const Context& ctx) const {
    const RSpikeData d = simulate_rspike(spec, ctx.seed);
    write_design(ctx, "rspike.csv", d.problem.X, d.problem.y);
    write_vector(ctx, "rspike_beta.csv", d.beta);
    if (d.resampled) std::cerr << "note: redrew responses to get both classes\n";
  }
};

struct SimFactor {
  FactorModelSpec spec;
  bool holdout = false;
  std::string loadings = "ones";
  std::string response = "component";

  void run(const Context& ctx) const {
    FactorModelSpec s = spec;
    if (holdout) {
      s = holdout_factor_spec();
    } else {
      s.loadings = loadings == "gaussian" ? Loadings::Gaussian : Loadings::Ones;
      s.response = response == "lowest" ? FactorResponse::LowestFactor : FactorResponse::StrongComponent;
    }
    const FactorData f = gen_factor_model(s, ctx.seed);
    write_design(ctx, "factor.csv", f.data.X, f.data.y);
    if (f.beta.size() > 0) write_vector(ctx, "factor_beta.csv", f.beta);
  }
};

struct BenchProbit {
  int reps = 20;
  RSpikeSpec spec;
  int iters = 3000;
  int burn = 1000;

  void run(const Context& ctx) const {
    ProbitGibbsConfig g;
    g.iterations = iters;
    g.burn_in = burn;
    const auto reps_out = run_rspike_benchmark(spec, reps, ctx.seed, g);
    std::vector<std::vector<double>> per;
    for (std::size_t i = 0; i < reps_out.size(); ++i) {
      const auto& r = reps_out[i];
      per.push_back({static_cast<double>(i + 1), r.sse_hs, r.sse_lasso_cv, r.sse_lasso_ct, r.sse_mle,
                     r.mle_separated ? 1.0 : 0.0});
    }
    write_table(ctx, "probit_rspike_reps.csv",
                {"rep", "horseshoe", "lasso_cv", "lasso_ct", "mle", "mle_separated"}, per);
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
    for (const auto& m : summarize_rspike(reps_out)) {
      names.push_back(m.method);
      rows.push_back({m.median_sse, m.mean_sse});
    }
    write_named(ctx, "probit_rspike.csv", {"method", "median_sse", "mean_sse"}, names, rows);
  }
};

struct BenchHoldout {
  std::string data;
  std::string response;
  int reps = 50;
  double fraction = 0.75;
  int folds = 10;
  int iters = 4000;
  int burn = 1000;

  void run(const Context& ctx) const {
    Dataset raw;
    if (data.empty()) {
      raw = gen_factor_model(holdout_factor_spec(), ctx.seed).data;
    } else {
      raw = load_table(data, response);
    }
    HoldoutConfig cfg;
    cfg.reps = reps;
    cfg.fraction = fraction;
    cfg.folds = folds;
    cfg.seed = derive_seed(ctx.seed, 1);
    cfg.gibbs.iterations = iters;
    cfg.gibbs.burn_in = burn;
    const HoldoutResult res = run_holdout(raw.X, raw.y, cfg);
    std::vector<std::string> header{"split"};
    for (Method m : res.methods) header.push_back(to_string(m));
    std::vector<std::vector<double>> per;
    for (std::size_t i = 0; i < res.sse.size(); ++i) {
      std::vector<double> r{static_cast<double>(i + 1)};
      r.insert(r.end(), res.sse[i].begin(), res.sse[i].end());
      per.push_back(std::move(r));
    }
    write_table(ctx, "holdout_splits.csv", header, per);
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
    const auto mean = res.mean_sse();
    for (std::size_t k = 0; k < res.methods.size(); ++k) {
      names.push_back(to_string(res.methods[k]));
      rows.push_back({mean[k]});
    }
    write_named(ctx, "holdout.csv", {"method", "mean_sse"}, names, rows);
  }
};

// Resolved value of every long option on the parsed command path.
nlohmann::json collect_flags(const std::vector<CLI::App*>& path) {
  nlohmann::json flags = nlohmann::json::object();
  for (const CLI::App* app : path) {
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty()) continue;
      const std::string name = opt->get_lnames().front();
      if (name == "help" || name == "out" || name == "seed") continue;
      std::string value;
      if (opt->count() > 0) {
        const auto res = opt->reduced_results();
        for (std::size_t i = 0; i < res.size(); ++i) value += (i ? "," : "") + res[i];
        if (res.empty()) value = "true";
      } else {
        value = opt->get_default_str();
      }
      if (!value.empty()) flags[name] = value;
    }
  }
  return flags;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"levyshrink"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data());
}

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"Shrinkage priors and penalties built from Levy subordinators"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();

  std::string out = "out";
  std::uint64_t seed = 42;
  bool plot = false;
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "random seed");
  app.add_flag("--plot", plot, "also write SVG plots");

  struct Leaf {
    CLI::App* app;
    std::vector<CLI::App*> path;
    std::string command;
    std::function<void(const Context&)> run;
  };
  std::vector<Leaf> leaves;
  auto group = [&app](const std::string& name, const std::string& desc) {
    CLI::App* g = app.add_subcommand(name, desc);
    g->require_subcommand(1);
    g->fallthrough();
    return g;
  };

  PenaltyEval pe;
  {
    CLI::App* g = group("penalty", "penalty functions");
    CLI::App* s = g->add_subcommand("eval", "tabulate a penalty on a grid");
    s->fallthrough();
    pe.fam.add_to(s);
    s->add_option("--transform", pe.transform, "sq (beta^2/2) or abs (|beta|)")
        ->check(CLI::IsMember({"sq", "abs"}));
    s->add_option("--nu", pe.nu, "penalty scale");
    s->add_option("--grid", pe.grid, "lo:hi:step")->check(kGridCheck);
    leaves.push_back({s, {g, s}, "penalty eval", [&pe](const Context& c) { pe.run(c); }});
  }

  MeanCurveCmd mc;
  {
    CLI::App* s = app.add_subcommand("mean-curve", "posterior mean under a normal likelihood");
    s->fallthrough();
    mc.fam.add_to(s);
    s->add_option("--transform", mc.transform, "sq or abs")->check(CLI::IsMember({"sq", "abs"}));
    s->add_option("--nu", mc.nu, "penalty scale");
    s->add_option("--sigma", mc.sigma, "noise sd");
    s->add_option("--ymax", mc.ymax, "curve spans [-ymax, ymax]");
    s->add_option("--n", mc.n, "number of points");
    s->add_flag("--horseshoe", mc.horseshoe, "use the horseshoe prior instead of --family");
    s->add_option("--tau", mc.tau, "horseshoe global scale");
    leaves.push_back({s, {s}, "mean-curve", [&mc](const Context& c) { mc.run(c); }});
  }

  FitEm fe;
  FitOrtho fo;
  {
    CLI::App* g = group("fit", "fit a regression");
    CLI::App* s = g->add_subcommand("em", "posterior mode by EM");
    s->fallthrough();
    fe.fam.add_to(s);
    s->add_option("--transform", fe.transform, "sq (ridge mixture) or abs (LLA)")
        ->check(CLI::IsMember({"sq", "abs"}));
    s->add_option("--nu", fe.nu, "penalty scale");
    s->add_option("--sigma", fe.sigma, "noise sd");
    s->add_option("--data", fe.data, "CSV with header")->required()->check(CLI::ExistingFile);
    s->add_option("--response", fe.response, "response column (default: last)");
    s->add_option("--tol", fe.tol, "convergence tolerance");
    s->add_option("--max-iter", fe.max_iter, "outer iteration limit");
    leaves.push_back({s, {g, s}, "fit em", [&fe](const Context& c) { fe.run(c); }});

    CLI::App* o = g->add_subcommand("ortho", "SVD-orthogonalized shrinkage");
    o->fallthrough();
    o->add_option("--method", fo.method, "rr | pcr | pls | gprior | bayes")
        ->check(CLI::IsMember({"rr", "pcr", "pls", "gprior", "bayes"}));
    o->add_option("--data", fo.data, "CSV with header")->required()->check(CLI::ExistingFile);
    o->add_option("--response", fo.response, "response column (default: last)");
    o->add_option("--nu", fo.nu, "ridge penalty (cross-validated when absent)");
    o->add_option("--K", fo.K, "components for pcr/pls (cross-validated when absent)");
    o->add_option("--g", fo.g, "g-prior scale (cross-validated when absent)");
    o->add_option("--iters", fo.iters, "Gibbs iterations");
    o->add_option("--burn", fo.burn, "Gibbs burn-in");
    o->add_option("--folds", fo.folds, "CV folds");
    o->add_option("--level", fo.level, "credible level");
    leaves.push_back({o, {g, o}, "fit ortho", [&fo](const Context& c) { fo.run(c); }});
  }

  SimIncrements si;
  SimTwoGroups st;
  SimRSpike sr;
  SimFactor sf;
  {
    CLI::App* g = group("simulate", "draw synthetic data");
    CLI::App* s = g->add_subcommand("increments", "subordinator or Meixner increments");
    s->fallthrough();
    s->add_option("--family", si.fam.family, "gamma | stable | lasso | ig | cp | drift | meixner")
        ->check(CLI::IsMember({"gamma", "stable", "lasso", "ig", "cp", "drift", "meixner"}));
    s->add_option("--index", si.fam.index, "stable index alpha");
    s->add_option("--scale", si.fam.scale, "stable scale");
    s->add_option("--rate", si.fam.rate, "inverse-Gaussian rate");
    s->add_option("--theta", si.fam.theta, "compound-Poisson jump rate");
    s->add_option("--eta", si.fam.eta, "compound-Poisson jump sd");
    s->add_option("--time", si.time, "horizon s");
    s->add_option("--p", si.p, "number of increments");
    s->add_option("--a", si.a, "Meixner a");
    s->add_option("--b", si.b, "Meixner b");
    s->add_option("--delta", si.delta, "Meixner delta");
    s->add_option("--terms", si.terms, "series terms for Meixner pieces");
    leaves.push_back({s, {g, s}, "simulate increments", [&si](const Context& c) { si.run(c); }});

    CLI::App* t = g->add_subcommand("two-groups", "compound-Poisson signal plus noise");
    t->fallthrough();
    t->add_option("--theta", st.theta, "jump rate");
    t->add_option("--delta", st.delta, "grid step");
    t->add_option("--eta", st.eta, "jump sd");
    t->add_option("--sigma", st.sigma, "noise scale");
    t->add_option("--p", st.p, "grid size");
    leaves.push_back({t, {g, t}, "simulate two-groups", [&st](const Context& c) { st.run(c); }});

    CLI::App* r = g->add_subcommand("rspike", "r-spike probit data");
    r->fallthrough();
    r->add_option("--p", sr.spec.p, "predictors");
    r->add_option("--n", sr.spec.n, "observations");
    r->add_option("--r", sr.spec.r, "nonzero coefficients");
    leaves.push_back({r, {g, r}, "simulate rspike", [&sr](const Context& c) { sr.run(c); }});

    CLI::App* f = g->add_subcommand("factor", "factor-model regression data");
    f->fallthrough();
    f->add_option("--n", sf.spec.n, "observations");
    f->add_option("--p", sf.spec.p, "predictors");
    f->add_option("--k", sf.spec.k, "factors");
    f->add_option("--psi", sf.spec.psi, "idiosyncratic sd");
    f->add_option("--loadings", sf.loadings, "ones or gaussian")->check(CLI::IsMember({"ones", "gaussian"}));
    f->add_option("--response", sf.response, "component or lowest")
        ->check(CLI::IsMember({"component", "lowest"}));
    f->add_option("--component", sf.spec.component, "strong component (1-based)");
    f->add_option("--strength", sf.spec.strength, "signal strength");
    f->add_flag("--holdout", sf.holdout, "use the holdout-benchmark design (n=50, p=100)");
    leaves.push_back({f, {g, f}, "simulate factor", [&sf](const Context& c) { sf.run(c); }});
  }

  BenchProbit bp;
  BenchHoldout bh;
  {
    CLI::App* g = group("benchmark", "method comparisons");
    CLI::App* s = g->add_subcommand("probit-rspike", "horseshoe vs lasso vs MLE probit");
    s->fallthrough();
    s->add_option("--reps", bp.reps, "replications");
    s->add_option("--p", bp.spec.p, "predictors");
    s->add_option("--n", bp.spec.n, "observations");
    s->add_option("--r", bp.spec.r, "nonzero coefficients");
    s->add_option("--iters", bp.iters, "Gibbs iterations");
    s->add_option("--burn", bp.burn, "Gibbs burn-in");
    leaves.push_back({s, {g, s}, "benchmark probit-rspike", [&bp](const Context& c) { bp.run(c); }});

    CLI::App* h = g->add_subcommand("holdout", "holdout SSE of bayes / pls / pcr / rr");
    h->fallthrough();
    h->add_option("--data", bh.data, "CSV with header (synthetic factor data when absent)")
        ->check(CLI::ExistingFile);
    h->add_option("--response", bh.response, "response column (default: last)");
    h->add_option("--reps", bh.reps, "random splits");
    h->add_option("--fraction", bh.fraction, "training fraction");
    h->add_option("--folds", bh.folds, "CV folds");
    h->add_option("--iters", bh.iters, "Gibbs iterations");
    h->add_option("--burn", bh.burn, "Gibbs burn-in");
    leaves.push_back({h, {g, h}, "benchmark holdout", [&bh](const Context& c) { bh.run(c); }});
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const Leaf* leaf = nullptr;
  for (const auto& l : leaves) {
    if (l.app->parsed()) leaf = &l;
  }
  if (leaf == nullptr) {
    std::cerr << app.help();
    return 2;
  }

  Context ctx{fs::path(out), seed, plot};
  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    fs::create_directories(ctx.out);
    leaf->run(ctx);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::vector<CLI::App*> path{&app};
  path.insert(path.end(), leaf->path.begin(), leaf->path.end());
  nlohmann::json flags = collect_flags(path);
  const nlohmann::json manifest = {{"command", leaf->command},
                                   {"flags", flags},
                                   {"seed", seed},
                                   {"started", started},
                                   {"elapsed_s", elapsed}};
  std::ofstream mf(ctx.out / "manifest.json");
  mf << manifest.dump(2) << "\n";
  return 0;
}

}  // namespace levyshrink::cli
