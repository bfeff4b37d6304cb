#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hps/app/commands.hpp"
#include "hps/app/config.hpp"

using namespace hps::app;
namespace fs = std::filesystem;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hps_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

int run(const std::string& cmd, const RunConfig& cfg, const fs::path& dir, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = run_command(cmd, cfg, CommandOptions{dir, 1, 0}, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

const char* kSmall = R"(
[problem]
a = constant
b = constant
kappa = 1
data = cosh_x
[discretization]
levels = 1
n_gauss = 6
[converge]
n_gauss = 4, 6
[scaling]
levels = 1, 2
[verify]
fd_grids = 32, 64
)";

}  // namespace

TEST_CASE("config parsing reads sections and lists") {
  const RunConfig c = parse(kSmall);
  CHECK(c.levels == 1);
  CHECK(c.n_gauss == 6);
  CHECK(c.converge_n_gauss == std::vector<int>{4, 6});
  CHECK(c.fd_grids == std::vector<int>{32, 64});
  CHECK(c.analytic().has_value());
  CHECK(c.describe().find("n_gauss=6") != std::string::npos);
}

TEST_CASE("config validation errors") {
  CHECK_THROWS_AS(parse("[problem]\na = marble\n"), ConfigError);
  CHECK_THROWS_AS(parse("[discretization]\nlevels = 8\n"), ConfigError);
  CHECK_THROWS_AS(parse("[discretization]\nn_gauss = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse("[discretization]\nn_gauss = ten\n"), ConfigError);
  CHECK_THROWS_AS(parse("[nonsense]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[problem]\ncolour = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[verify]\nfd_grids = 32, 48\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), ConfigError);
}

TEST_CASE("variable presets have no closed form") {
  const RunConfig c = parse("[problem]\na = bump\nb = oscillatory\n");
  CHECK_FALSE(c.analytic().has_value());
  RunConfig bad = c;
  CHECK(run("converge", bad, scratch("converge_bad")) == kExitConfig);
}

TEST_CASE("unknown command and degenerate problem exit with code 2") {
  RunConfig c = parse(kSmall);
  CHECK(run("explode", c, scratch("unknown")) == kExitConfig);
  c.b_preset = "zero";
  std::string err;
  CHECK(run("verify", c, scratch("degenerate"), &err) == kExitConfig);
  CHECK(err.find("degenerate problem") != std::string::npos);
}

TEST_CASE("solve writes the documented CSVs") {
  const fs::path dir = scratch("solve");
  REQUIRE(run("solve", parse(kSmall), dir) == kExitOk);
  const auto sol = lines(dir / "solution.csv");
  REQUIRE(sol.size() == 2 + 12 * 6);
  CHECK(sol[0].rfind("# hps solve config: ", 0) == 0);
  CHECK(sol[1] == "edge_id,orientation,node_x,node_y,u,v");
  const std::string summary = slurp(dir / "summary.csv");
  CHECK(summary.find("metric,value") != std::string::npos);
  CHECK(summary.find("max_edge_error") != std::string::npos);
  CHECK(fs::exists(dir / "run.log"));
}

TEST_CASE("outputs are bit-identical across runs and thread counts") {
  const RunConfig c = parse(kSmall);
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  std::ostringstream out, err;
  REQUIRE(run_command("solve", c, CommandOptions{a, 1, 0}, out, err) == kExitOk);
  REQUIRE(run_command("solve", c, CommandOptions{b, 2, 0}, out, err) == kExitOk);
  CHECK(slurp(a / "solution.csv") == slurp(b / "solution.csv"));
  CHECK(slurp(a / "summary.csv") == slurp(b / "summary.csv"));
}

TEST_CASE("converge, scaling and rankprobe emit one row per sweep entry") {
  const RunConfig c = parse(kSmall);
  const fs::path dir = scratch("sweeps");
  REQUIRE(run("converge", c, dir) == kExitOk);
  auto conv = lines(dir / "converge.csv");
  REQUIRE(conv.size() == 4);
  CHECK(conv[1] == "n_gauss,max_error");
  REQUIRE(run("scaling", c, dir) == kExitOk);
  auto sc = lines(dir / "scaling.csv");
  REQUIRE(sc.size() == 4);
  CHECK(sc[1] == "L,N_nodes,N_edge,flops_leaf,flops_merge,flops_total,flops_build,flops_solve");
  CHECK(sc[3].rfind("2,240,40,", 0) == 0);
  CHECK(lines(dir / "scaling_fit.csv").size() == 2 + 5);
  REQUIRE(run("rankprobe", c, dir) == kExitOk);
  auto rk = lines(dir / "ranks.csv");
  CHECK(rk[1] == "level,block,dim,rank@1e-6,rank@1e-8,rank@1e-10");
  CHECK(rk.size() == 2 + 12);
}

TEST_CASE("verify passes on defaults and fails with a corrupted leaf") {
  RunConfig c = parse(kSmall);
  const fs::path dir = scratch("verify");
  CHECK(run("verify", c, dir) == kExitOk);
  const std::string report = slurp(dir / "verify.csv");
  CHECK(report.find("fail") == std::string::npos);
  c.corrupt_leaf = 3;
  CHECK(run("verify", c, scratch("verify_bad")) == kExitFailure);
  c.corrupt_leaf = 1;
  CHECK(run("verify", c, scratch("verify_badid")) == kExitConfig);
}
