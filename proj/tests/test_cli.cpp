#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rrlm/driver.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rrlm;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rrlm_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

RunManifest small_nonlinear(const fs::path& out) {
  RunManifest m;
  m.problem = "nonlinear_exp";
  m.problem_n = 20;
  m.delta = 0.001;
  m.seed = 3;
  m.out_dir = out.string();
  return m;
}

}  // namespace

TEST_CASE("manifest round-trips through its file form without loss") {
  const auto dir = fresh_dir("manifest");
  RunManifest m;
  m.problem = "nonlinear_exp";
  m.problem_n = 33;
  m.problem_s = 1.25;
  m.eta = 0.3;
  m.tau = 2.7182818284590451;
  m.eps = 0.031415926535897931;
  m.delta = 0.004;
  m.seed = 987654321;
  m.strategy = "geometric";
  m.r0 = 0.123456789012345678;
  m.delta_list = {0.008, 0.004, 0.002, 0.001};
  m.strategy_list = {"adaptive", "geometric"};
  m.r0_list = {0.1, 0.5, 0.9};
  m.out_dir = (dir / "x").string();
  write_manifest(m, (dir / "m.txt").string());
  const RunManifest back = parse_manifest((dir / "m.txt").string());
  CHECK(back.problem == m.problem);
  CHECK(back.problem_n == m.problem_n);
  CHECK(back.problem_s == m.problem_s);
  CHECK(back.eta == m.eta);
  CHECK(back.tau == m.tau);
  CHECK(back.eps == m.eps);
  CHECK(back.delta == m.delta);
  CHECK(back.seed == m.seed);
  CHECK(back.strategy == m.strategy);
  CHECK(back.r0 == m.r0);
  CHECK(back.delta_list == m.delta_list);
  CHECK(back.strategy_list == m.strategy_list);
  CHECK(back.r0_list == m.r0_list);
  CHECK(back.out_dir == m.out_dir);
  // and byte-stable on a second write
  write_manifest(back, (dir / "m2.txt").string());
  CHECK(slurp(dir / "m.txt") == slurp(dir / "m2.txt"));
}

TEST_CASE("manifest parser rejects unknown keys") {
  const auto dir = fresh_dir("badkey");
  std::ofstream((dir / "m.txt").string()) << "no_such_key = 1\n";
  RunManifest m;
  CHECK_THROWS(parse_manifest((dir / "m.txt").string(), m));
}

TEST_CASE("simulate then solve produces the run artifacts and exit code") {
  const auto dir = fresh_dir("roundtrip");
  const RunManifest m = small_nonlinear(dir);
  REQUIRE(cmd_simulate(m) == 0);
  CHECK(fs::exists(dir / "y.txt"));
  CHECK(fs::exists(dir / "y_delta.txt"));
  CHECK(fs::exists(dir / "sim_meta.txt"));
  CHECK(fs::exists(dir / "manifest.txt"));

  const int code = cmd_solve(m);
  CHECK(code == 0);  // discrepancy reached
  const auto records = read_iterations_csv((dir / "iterations.csv").string());
  const auto summary = read_summary((dir / "summary.txt").string());
  REQUIRE_FALSE(records.empty());
  CHECK(summary.stop_reason == StopReason::discrepancy);
  CHECK(summary.kstar == static_cast<int>(records.size()));
  long n = 0;
  for (const auto& r : records) n += r.subproblem_solves;
  CHECK(n == summary.total_subproblems);  // summary equals CSV recomputation
  CHECK(summary.final_residual <= paper43_config(0.4).tau * summary.delta_abs);
}

TEST_CASE("identical manifests give byte-identical data and iteration files") {
  const auto d1 = fresh_dir("det1");
  const auto d2 = fresh_dir("det2");
  RunManifest m1 = small_nonlinear(d1);
  RunManifest m2 = small_nonlinear(d2);
  REQUIRE(cmd_simulate(m1) == 0);
  REQUIRE(cmd_simulate(m2) == 0);
  CHECK(slurp(d1 / "y_delta.txt") == slurp(d2 / "y_delta.txt"));
  REQUIRE(cmd_solve(m1) == cmd_solve(m2));
  CHECK(slurp(d1 / "iterations.csv") == slurp(d2 / "iterations.csv"));
  CHECK(slurp(d1 / "summary.txt") == slurp(d2 / "summary.txt"));
}

TEST_CASE("kmax runs exit with code 2") {
  const auto dir = fresh_dir("kmax");
  RunManifest m = small_nonlinear(dir);
  m.delta = 0.0;  // exact data cannot hit the discrepancy in two steps
  m.kmax = 2;
  REQUIRE(cmd_simulate(m) == 0);
  CHECK(cmd_solve(m) == 2);
}

TEST_CASE("sweep writes one row per combination and keeps going after failures") {
  const auto dir = fresh_dir("sweep");
  RunManifest m = small_nonlinear(dir);
  m.delta_list = {0.01, 0.001};
  m.strategy_list = {"adaptive", "geometric"};
  m.r0_list = {0.5};
  m.kmax = 80;
  CHECK(cmd_sweep(m) == 0);
  const std::string csv = slurp(dir / "sweep.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 rows
  CHECK(fs::exists(dir / "run_d0.01_adaptive_r0.5" / "iterations.csv"));
  CHECK(fs::exists(dir / "run_d0.001_geometric_r0.5" / "summary.txt"));
}

TEST_CASE("report aligns runs on k and keeps the linearized residual inside its bounds") {
  const auto d1 = fresh_dir("rep1");
  const auto d2 = fresh_dir("rep2");
  RunManifest m1 = small_nonlinear(d1);
  RunManifest m2 = small_nonlinear(d2);
  m2.delta = 0.01;  // shorter run
  REQUIRE(cmd_simulate(m1) == 0);
  REQUIRE(cmd_simulate(m2) == 0);
  REQUIRE(cmd_solve(m1) == 0);
  REQUIRE(cmd_solve(m2) == 0);

  const auto out = fresh_dir("report_out");
  REQUIRE(cmd_report({d1.string(), d2.string()}, out.string()) == 0);
  for (const char* f :
       {"residual_vs_k.txt", "error_vs_k.txt", "alpha_vs_k.txt", "linres_bounds_vs_k.txt"})
    CHECK(fs::exists(out / f));

  // overlay: H between c and d wherever a row exists; nan padding afterwards
  std::ifstream f((out / "linres_bounds_vs_k.txt").string());
  std::string header;
  std::getline(f, header);
  const auto rec1 = read_iterations_csv((d1 / "iterations.csv").string());
  const auto rec2 = read_iterations_csv((d2 / "iterations.csv").string());
  std::size_t rows = 0;
  std::string line;
  while (std::getline(f, line)) {
    // stod parses the nan padding that stream extraction rejects
    std::istringstream is(line);
    std::vector<std::string> tok;
    std::string t;
    while (is >> t) tok.push_back(t);
    REQUIRE(tok.size() == 7);
    const int k = std::stoi(tok[0]);
    const double h1 = std::stod(tok[1]), c1 = std::stod(tok[2]), dd1 = std::stod(tok[3]);
    const double h2 = std::stod(tok[4]), c2 = std::stod(tok[5]), dd2 = std::stod(tok[6]);
    ++rows;
    if (static_cast<std::size_t>(k) < rec1.size()) {
      CHECK(h1 >= c1);
      CHECK(h1 <= dd1);
    } else {
      CHECK(std::isnan(h1));
    }
    if (static_cast<std::size_t>(k) < rec2.size()) {
      CHECK(h2 >= c2);
      CHECK(h2 <= dd2);
    } else {
      CHECK(std::isnan(h2));
    }
  }
  CHECK(rows == std::max(rec1.size(), rec2.size()));

  // empty directory is an error
  const auto empty = fresh_dir("empty_run");
  CHECK_THROWS(cmd_report({empty.string()}, out.string()));
}
