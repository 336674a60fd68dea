#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const char* cli() { return HBART_CLI_PATH; }

int run(const std::string& args) {
  const std::string cmd = std::string(cli()) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::path("cli_tmp") / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string s(const std::string& sub) const { return (path / sub).string(); }
};

}  // namespace

TEST_CASE("cli: simulate writes the documented columns and truth values") {
  TempDir td("sim");
  REQUIRE(run("simulate --n 50 --seed 4 --out " + td.s("sim")) == 0);
  std::ifstream in(td.path / "sim" / "train.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,y,f_true,s_true");
  // spot-check the truth columns on the first row
  std::string row;
  std::getline(in, row);
  double x, y, f, s;
  REQUIRE(std::sscanf(row.c_str(), "%lf,%lf,%lf,%lf", &x, &y, &f, &s) == 4);
  CHECK(f == doctest::Approx(4.0 * x * x).epsilon(1e-12));
  CHECK(s == doctest::Approx(0.2 * std::exp(2.0 * x)).epsilon(1e-12));
  CHECK(fs::exists(td.path / "sim" / "test.csv"));
  CHECK(fs::exists(td.path / "sim" / "manifest.txt"));
}

TEST_CASE("cli: simulate -> fit -> diagnose pipeline emits all declared files") {
  TempDir td("pipe");
  REQUIRE(run("simulate --n 90 --seed 11 --out " + td.s("sim")) == 0);
  REQUIRE(run("fit --data " + td.s("sim/train.csv") +
              " --response y --test " + td.s("sim/test.csv") +
              " --exclude f_true,s_true --m 10 --mprime 4 --niter 150"
              " --burnin 50 --seed 2 --out " + td.s("fit")) == 0);
  for (const char* f : {"draws.csv", "forests.txt", "varactivity.csv",
                        "acceptance.csv", "manifest.txt"})
    CHECK(fs::exists(td.path / "fit" / f));
  REQUIRE(run("diagnose --draws " + td.s("fit/draws.csv") + " --data " +
              td.s("sim/test.csv") +
              " --response y --exclude f_true,s_true --seed 3 --out " +
              td.s("diag")) == 0);
  for (const char* f : {"hevidence.csv", "hevidence.svg", "percentiles.csv",
                        "percentiles.svg", "estat.txt", "trace.csv", "trace.svg",
                        "manifest.txt"})
    CHECK(fs::exists(td.path / "diag" / f));
}

TEST_CASE("cli: baseline model trace carries a sigma column") {
  TempDir td("bart");
  REQUIRE(run("simulate --n 80 --seed 21 --out " + td.s("sim")) == 0);
  REQUIRE(run("fit --data " + td.s("sim/train.csv") +
              " --response y --exclude f_true,s_true --model bart --m 10"
              " --niter 120 --burnin 40 --seed 2 --out " + td.s("fit")) == 0);
  REQUIRE(run("diagnose --draws " + td.s("fit/draws.csv") + " --data " +
              td.s("sim/train.csv") +
              " --response y --exclude f_true,s_true --seed 3 --out " +
              td.s("diag")) == 0);
  std::ifstream in(td.path / "diag" / "trace.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header.substr(0, 10) == "iter,sigma");
}

TEST_CASE("cli: identical command and seed produce byte-identical outputs") {
  TempDir td("det");
  REQUIRE(run("simulate --n 70 --seed 5 --out " + td.s("sim")) == 0);
  const std::string fit_args =
      "fit --data " + td.s("sim/train.csv") +
      " --response y --exclude f_true,s_true --m 8 --mprime 4 --niter 100"
      " --burnin 30 --seed 9 --out ";
  REQUIRE(run(fit_args + td.s("a")) == 0);
  REQUIRE(run(fit_args + td.s("b")) == 0);
  for (const char* f : {"draws.csv", "forests.txt", "varactivity.csv",
                        "acceptance.csv"})
    CHECK(slurp(td.path / "a" / f) == slurp(td.path / "b" / f));
}

TEST_CASE("cli: the manifest command line reproduces the run") {
  TempDir td("man");
  REQUIRE(run("simulate --n 60 --seed 6 --out " + td.s("sim")) == 0);
  REQUIRE(run("fit --data " + td.s("sim/train.csv") +
              " --response y --exclude f_true,s_true --m 6 --mprime 3"
              " --niter 80 --burnin 20 --seed 13 --out " + td.s("a")) == 0);
  // pull the resolved command out of the manifest and run it against a new
  // output directory
  std::ifstream man(td.path / "a" / "manifest.txt");
  std::string line, command;
  while (std::getline(man, line))
    if (line.rfind("command=", 0) == 0) command = line.substr(8);
  REQUIRE_FALSE(command.empty());
  const std::string outa = td.s("a");
  const std::string outb = td.s("b");
  command.replace(command.rfind(outa), outa.size(), outb);
  REQUIRE(run(command) == 0);
  CHECK(slurp(td.path / "a" / "draws.csv") == slurp(td.path / "b" / "draws.csv"));
}

TEST_CASE("cli: exit codes distinguish usage, data and numeric errors") {
  TempDir td("err");
  CHECK(run("fit --data nonexistent.csv --out " + td.s("x")) == 2);
  CHECK(run("fit --no-such-flag") == 1);
  CHECK(run("nonsense-subcommand") == 1);
  // malformed data: response column absent
  {
    std::ofstream out(td.path / "bad.csv");
    out << "a,b\n1,2\n3,4\n";
  }
  CHECK(run("fit --data " + td.s("bad.csv") + " --response y --out " +
            td.s("x")) == 2);
}

TEST_CASE("cli: predict modes produce the documented shapes") {
  TempDir td("pred");
  REQUIRE(run("simulate --n 80 --seed 31 --out " + td.s("sim")) == 0);
  REQUIRE(run("fit --data " + td.s("sim/train.csv") +
              " --response y --exclude f_true,s_true --m 8 --mprime 4"
              " --niter 120 --burnin 40 --forest-every 4 --seed 2 --out " +
              td.s("fit")) == 0);
  REQUIRE(run("predict --forests " + td.s("fit/forests.txt") + " --data " +
              td.s("sim/test.csv") +
              " --response y --exclude f_true,s_true --mode mean_sd --out " +
              td.s("mean.csv")) == 0);
  {
    std::ifstream in(td.path / "mean.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "point,f_mean,f_lo,f_hi,s_mean,s_lo,s_hi");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 80);
  }
  REQUIRE(run("predict --forests " + td.s("fit/forests.txt") + " --data " +
              td.s("sim/test.csv") +
              " --response y --exclude f_true,s_true --mode predictive"
              " --seed 4 --out " + td.s("pred.csv")) == 0);
  {
    std::ifstream in(td.path / "pred.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header.substr(0, 9) == "draw,y@p1");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 20);  // kept 80 draws, forest-every 4
  }
  REQUIRE(run("predict --forests " + td.s("fit/forests.txt") + " --data " +
              td.s("sim/test.csv") +
              " --response y --exclude f_true,s_true --mode plugin"
              " --plugin-draws 55 --seed 4 --out " + td.s("plug.csv")) == 0);
  {
    std::ifstream in(td.path / "plug.csv");
    std::size_t rows = 0;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 55);
  }
}
