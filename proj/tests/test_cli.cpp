#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "levyshrink/cli.hpp"
#include "levyshrink/csv.hpp"
#include "levyshrink/data_io.hpp"
#include "levyshrink/errors.hpp"

using namespace levyshrink;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "levyshrink_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(std::vector<std::string> args) { return cli::dispatch(args); }

}  // namespace

TEST_CASE("Grid syntax") {
  CHECK(cli::parse_grid("-3:3:0.1").size() == 61);
  CHECK(cli::parse_grid("0:1:0.25").back() == 1.0);
  CHECK(cli::parse_grid("0:0.95:0.1").size() == 10);
  CHECK(cli::parse_grid("2:2:1").size() == 1);
  CHECK_THROWS_AS(cli::parse_grid("0:1"), PreconditionError);
  CHECK_THROWS_AS(cli::parse_grid("1:0:0.1"), PreconditionError);
  CHECK_THROWS_AS(cli::parse_grid("0:1:0"), PreconditionError);
  CHECK_THROWS_AS(cli::parse_grid("a:1:0.1"), PreconditionError);
}

TEST_CASE("penalty eval writes the table and a manifest") {
  const fs::path out = fresh_dir("penalty") / "out";
  REQUIRE(run({"--out", out.string(), "penalty", "eval", "--family", "gamma", "--transform", "sq", "--nu",
               "1", "--grid", "-3:3:0.1"}) == 0);
  const csv::Table t = csv::read_file(out / "penalty.csv");
  CHECK(t.header == std::vector<std::string>{"beta", "penalty", "weight", "log_density"});
  CHECK(t.rows.size() == 61);
  const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
  std::vector<std::string> keys;
  for (auto it = m.begin(); it != m.end(); ++it) keys.push_back(it.key());
  std::sort(keys.begin(), keys.end());
  CHECK(keys == std::vector<std::string>{"command", "elapsed_s", "flags", "seed", "started"});
  CHECK(m["command"] == "penalty eval");
  CHECK(m["seed"] == 42);
  CHECK(m["flags"]["family"] == "gamma");
  CHECK(m["flags"]["grid"] == "-3:3:0.1");
}

TEST_CASE("--help on every subcommand exits 0") {
  for (const auto& path : std::vector<std::vector<std::string>>{
           {},
           {"penalty"},
           {"penalty", "eval"},
           {"mean-curve"},
           {"fit"},
           {"fit", "em"},
           {"fit", "ortho"},
           {"simulate"},
           {"simulate", "increments"},
           {"simulate", "two-groups"},
           {"simulate", "rspike"},
           {"simulate", "factor"},
           {"benchmark"},
           {"benchmark", "probit-rspike"},
           {"benchmark", "holdout"}}) {
    std::vector<std::string> args = path;
    args.push_back("--help");
    INFO(args.size());
    CHECK(run(args) == 0);
  }
}

TEST_CASE("Usage errors exit 2, module errors exit 1") {
  const fs::path dir = fresh_dir("errors");
  const std::string out = (dir / "out").string();
  CHECK(run({"--out", out, "penalty", "eval", "--bogus"}) == 2);
  CHECK(run({"--out", out, "penalty", "eval", "--family", "weibull"}) == 2);
  CHECK(run({"--out", out, "penalty", "eval", "--grid", "0:1"}) == 2);
  CHECK(run({"--out", out, "penalty", "eval", "--nu", "abc"}) == 2);
  CHECK(run({"--out", out, "fit", "em"}) == 2);
  CHECK(run({"--out", out}) == 2);
  CHECK(run({"--out", out, "fit", "ortho", "--data", (dir / "missing.csv").string()}) == 2);
  CHECK(run({"--out", out, "penalty", "eval", "--nu", "-1"}) == 1);
  CHECK(run({"--out", out, "mean-curve", "--transform", "abs"}) == 1);
  std::ofstream(dir / "bad.csv") << "a,y\n1,\n2,3\n";
  CHECK(run({"--out", out, "fit", "ortho", "--method", "rr", "--nu", "1", "--data", (dir / "bad.csv").string()}) == 1);
}

TEST_CASE("Runs write only inside the output directory") {
  const fs::path dir = fresh_dir("confined");
  const fs::path out = dir / "out";
  REQUIRE(run({"--out", out.string(), "--seed", "3", "simulate", "factor", "--n", "30", "--p", "8", "--k", "2", "--component", "3"}) == 0);
  const fs::path data = out / "factor.csv";
  REQUIRE(fs::exists(data));
  const fs::path out2 = dir / "out2";
  REQUIRE(run({"--out", out2.string(), "fit", "ortho", "--method", "bayes", "--data", data.string(), "--iters",
               "400", "--burn", "100", "--plot"}) == 0);
  REQUIRE(run({"--out", out2.string(), "fit", "em", "--family", "gamma", "--transform", "abs", "--nu", "2",
               "--data", data.string()}) == 0);
  std::vector<std::string> entries;
  for (const auto& e : fs::directory_iterator(dir)) entries.push_back(e.path().filename().string());
  std::sort(entries.begin(), entries.end());
  CHECK(entries == std::vector<std::string>{"out", "out2"});
  const csv::Table kappa = csv::read_file(out2 / "kappa.csv");
  CHECK(kappa.header == std::vector<std::string>{"component", "d", "kappa", "lo75", "hi75"});
  CHECK(kappa.rows.size() == 8);
  CHECK(fs::exists(out2 / "kappa.svg"));
  CHECK(csv::read_file(out2 / "trace.csv").header == std::vector<std::string>{"iter", "objective"});
  CHECK(csv::read_file(out2 / "coefficients.csv").rows.size() == 8);
}

TEST_CASE("Other subcommands produce their tables") {
  const fs::path out = fresh_dir("misc") / "out";
  const std::string o = out.string();
  CHECK(run({"--out", o, "simulate", "increments", "--family", "ig", "--rate", "2", "--p", "50"}) == 0);
  CHECK(csv::read_file(out / "increments.csv").rows.size() == 50);
  CHECK(run({"--out", o, "simulate", "increments", "--family", "meixner", "--a", "0.3", "--b", "0.7", "--p", "5"}) == 0);
  CHECK(run({"--out", o, "simulate", "two-groups", "--p", "100"}) == 0);
  CHECK(csv::read_file(out / "two_groups.csv").header == std::vector<std::string>{"index", "beta", "y"});
  CHECK(run({"--out", o, "simulate", "rspike", "--n", "60", "--p", "5", "--r", "2"}) == 0);
  CHECK(csv::read_file(out / "rspike.csv").rows.size() == 60);
  CHECK(run({"--out", o, "mean-curve", "--family", "lasso", "--n", "11", "--ymax", "4", "--plot"}) == 0);
  const csv::Table mc = csv::read_file(out / "mean_curve.csv");
  CHECK(mc.header == std::vector<std::string>{"y", "mean_ps", "mean_levy", "mean_oracle"});
  CHECK(mc.rows.size() == 11);
  CHECK(fs::exists(out / "mean_curve.svg"));
  CHECK(run({"--out", o, "mean-curve", "--horseshoe", "--n", "3"}) == 0);
  const std::string data = (out / "rspike.csv").string();
  CHECK(run({"--out", o, "fit", "ortho", "--method", "pcr", "--data", data, "--folds", "3"}) == 0);
  CHECK(run({"--out", o, "benchmark", "holdout", "--data", data, "--reps", "2", "--folds", "3", "--iters", "200",
             "--burn", "50"}) == 0);
  CHECK(csv::read_file(out / "holdout.csv").rows.size() == 4);
}

TEST_CASE("probit-rspike benchmark is byte-reproducible") {
  const fs::path dir = fresh_dir("bench");
  for (const char* name : {"a", "b"}) {
    REQUIRE(run({"--out", (dir / name).string(), "benchmark", "probit-rspike", "--reps", "2", "--seed", "7",
                 "--iters", "300", "--burn", "100"}) == 0);
  }
  const std::string a = slurp(dir / "a" / "probit_rspike.csv");
  CHECK(a == slurp(dir / "b" / "probit_rspike.csv"));
  CHECK(slurp(dir / "a" / "probit_rspike_reps.csv") == slurp(dir / "b" / "probit_rspike_reps.csv"));
  const csv::Table t = csv::read_file(dir / "a" / "probit_rspike.csv");
  CHECK(t.header == std::vector<std::string>{"method", "median_sse", "mean_sse"});
  CHECK(t.rows.size() == 4);
}
