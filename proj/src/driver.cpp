#include "rrlm/driver.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace rrlm {

namespace fs = std::filesystem;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_sim_meta(const std::string& path, const RunManifest& m, const SimulatedRun& sim) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "delta_rel = " << fmt17(m.delta) << "\n";
  f << "delta_abs = " << fmt17(sim.delta_abs) << "\n";
  f << "seed = " << m.seed << "\n";
  if (!f) throw std::runtime_error("write failed for " + path);
}

double read_meta_delta_abs(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " (run simulate first)");
  std::string line;
  while (std::getline(f, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::istringstream key(line.substr(0, eq));
    std::string k;
    key >> k;
    if (k == "delta_abs") return std::stod(line.substr(eq + 1));
  }
  throw std::runtime_error(path + ": missing delta_abs");
}

}  // namespace

BuiltProblem build_problem(const RunManifest& m) {
  BuiltProblem out;
  if (m.problem == "eit") {
    auto mesh = std::make_shared<eit::TriMesh>(eit::structured_mesh(m.mesh_n));
    out.mesh = mesh;
    out.problem = eit::make_problem(mesh, m.gamma_min);
  } else if (m.problem == "linear_diagonal") {
    out.problem = linear_diagonal(m.problem_n, m.problem_s);
  } else if (m.problem == "nonlinear_exp") {
    out.problem = nonlinear_exp(m.problem_n, m.problem_s);
  } else {
    throw std::invalid_argument("unknown problem: " + m.problem);
  }
  return out;
}

SimulatedRun simulate_for(const RunManifest& m, const BuiltProblem& built) {
  SimulatedRun out;
  if (m.problem == "eit") {
    const eit::TriMesh fine = eit::structured_mesh(m.data_mesh_n);
    const auto sim = eit::simulate_data(fine, *built.mesh, m.delta, m.seed);
    out.y = sim.y;
    out.y_delta = sim.y_delta;
    out.delta_abs = sim.delta_abs;
  } else {
    out.y = built.problem.forward(*built.problem.known_solution);
    const auto noisy = add_relative_noise(out.y, m.delta, built.problem.y_ip, m.seed);
    out.y_delta = noisy.y_delta;
    out.delta_abs = noisy.delta_abs;
  }
  return out;
}

int cmd_simulate(const RunManifest& m) {
  fs::create_directories(m.out_dir);
  const BuiltProblem built = build_problem(m);
  const SimulatedRun sim = simulate_for(m, built);
  write_vector(m.out_dir + "/y.txt", sim.y);
  write_vector(m.out_dir + "/y_delta.txt", sim.y_delta);
  write_sim_meta(m.out_dir + "/sim_meta.txt", m, sim);
  write_manifest(m, m.out_dir + "/manifest.txt");
  if (built.mesh) eit::write_mesh(*built.mesh, m.out_dir + "/mesh.txt");
  return 0;
}

int cmd_solve(const RunManifest& m) {
  const BuiltProblem built = build_problem(m);
  const DataVector y_delta = read_vector(m.out_dir + "/y_delta.txt");
  const double delta_abs = read_meta_delta_abs(m.out_dir + "/sim_meta.txt");
  const SolverConfig cfg = to_solver_config(m, delta_abs);
  const RunResult result = run(built.problem, y_delta, cfg);
  write_iterations_csv(m.out_dir + "/iterations.csv", result.records);
  write_summary(m.out_dir + "/summary.txt", summarize(result, delta_abs));
  return exit_code_for(result.stop_reason);
}

int cmd_sweep(const RunManifest& m) {
  fs::create_directories(m.out_dir);
  const std::vector<double> deltas = m.delta_list.empty() ? std::vector<double>{m.delta}
                                                          : m.delta_list;
  const std::vector<std::string> strategies =
      m.strategy_list.empty() ? std::vector<std::string>{m.strategy} : m.strategy_list;
  const std::vector<double> r0s = m.r0_list.empty() ? std::vector<double>{m.r0} : m.r0_list;

  const BuiltProblem built = build_problem(m);
  std::vector<SweepRow> rows;
  bool all_ok = true;
  for (double delta : deltas) {
    RunManifest md = m;
    md.delta = delta;
    SimulatedRun sim;
    bool sim_ok = true;
    std::string sim_error;
    try {
      sim = simulate_for(md, built);
    } catch (const std::exception& e) {
      sim_ok = false;
      sim_error = e.what();
    }
    for (const auto& strategy : strategies) {
      for (double r0 : r0s) {
        SweepRow row;
        row.delta = delta;
        row.strategy = strategy;
        row.r0 = r0;
        if (!sim_ok) {
          row.failed = true;
          row.error = sim_error;
          all_ok = false;
          rows.push_back(row);
          continue;
        }
        std::ostringstream dir;
        dir << m.out_dir << "/run_d" << delta << "_" << strategy << "_r" << r0;
        try {
          RunManifest mr = md;
          mr.strategy = strategy;
          mr.r0 = r0;
          mr.out_dir = dir.str();
          fs::create_directories(mr.out_dir);
          const SolverConfig cfg = to_solver_config(mr, sim.delta_abs);
          const RunResult result = run(built.problem, sim.y_delta, cfg);
          write_iterations_csv(mr.out_dir + "/iterations.csv", result.records);
          const RunSummary summary = summarize(result, sim.delta_abs);
          write_summary(mr.out_dir + "/summary.txt", summary);
          write_manifest(mr, mr.out_dir + "/manifest.txt");
          row.summary = summary;
        } catch (const std::exception& e) {
          row.failed = true;
          row.error = e.what();
          all_ok = false;
        }
        rows.push_back(row);
      }
    }
  }
  write_sweep_csv(m.out_dir + "/sweep.csv", rows);
  return all_ok ? 0 : 1;
}

int cmd_report(const std::vector<std::string>& run_dirs, const std::string& out_dir) {
  fs::create_directories(out_dir);
  write_report(run_dirs, out_dir);
  return 0;
}

}  // namespace rrlm
