#include "rrlm/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rrlm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::istringstream is(s);
  double v;
  while (is >> v) out.push_back(v);
  return out;
}

std::vector<std::string> parse_words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

}  // namespace

RunManifest::RunManifest() {
  const SolverConfig base = paper43_config(eta);
  tau = base.tau;
  eps = base.eps;
}

RunManifest preset(const std::string& name) {
  RunManifest m;
  if (name == "desk") {
    m.mesh_n = 16;
    m.data_mesh_n = 32;
  } else if (name == "paper43") {
    m.mesh_n = 27;
    m.data_mesh_n = 54;
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return m;
}

void parse_manifest(const std::string& path, RunManifest& m) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "problem") m.problem = val;
    else if (key == "mesh_n") m.mesh_n = std::stoi(val);
    else if (key == "data_mesh_n") m.data_mesh_n = std::stoi(val);
    else if (key == "problem_n") m.problem_n = std::stoi(val);
    else if (key == "problem_s") m.problem_s = std::stod(val);
    else if (key == "gamma_min") m.gamma_min = std::stod(val);
    else if (key == "eta") m.eta = std::stod(val);
    else if (key == "tau") m.tau = std::stod(val);
    else if (key == "eps") m.eps = std::stod(val);
    else if (key == "p") m.p = std::stod(val);
    else if (key == "alpha0") m.alpha0 = std::stod(val);
    else if (key == "r0") m.r0 = std::stod(val);
    else if (key == "a1") m.a1 = std::stod(val);
    else if (key == "a2") m.a2 = std::stod(val);
    else if (key == "p1") m.p1 = std::stod(val);
    else if (key == "p2") m.p2 = std::stod(val);
    else if (key == "delta") m.delta = std::stod(val);
    else if (key == "kmax") m.kmax = std::stoi(val);
    else if (key == "strategy") m.strategy = val;
    else if (key == "seed") m.seed = std::stoull(val);
    else if (key == "out_dir") m.out_dir = val;
    else if (key == "delta_list") m.delta_list = parse_doubles(val);
    else if (key == "strategy_list") m.strategy_list = parse_words(val);
    else if (key == "r0_list") m.r0_list = parse_doubles(val);
    else
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
}

RunManifest parse_manifest(const std::string& path) {
  RunManifest m;
  parse_manifest(path, m);
  return m;
}

void write_manifest(const RunManifest& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write config file: " + path);
  f << "problem = " << m.problem << "\n";
  f << "mesh_n = " << m.mesh_n << "\n";
  f << "data_mesh_n = " << m.data_mesh_n << "\n";
  f << "problem_n = " << m.problem_n << "\n";
  f << "problem_s = " << fmt17(m.problem_s) << "\n";
  f << "gamma_min = " << fmt17(m.gamma_min) << "\n";
  f << "eta = " << fmt17(m.eta) << "\n";
  f << "tau = " << fmt17(m.tau) << "\n";
  f << "eps = " << fmt17(m.eps) << "\n";
  f << "p = " << fmt17(m.p) << "\n";
  f << "alpha0 = " << fmt17(m.alpha0) << "\n";
  f << "r0 = " << fmt17(m.r0) << "\n";
  f << "a1 = " << fmt17(m.a1) << "\n";
  f << "a2 = " << fmt17(m.a2) << "\n";
  f << "p1 = " << fmt17(m.p1) << "\n";
  f << "p2 = " << fmt17(m.p2) << "\n";
  f << "delta = " << fmt17(m.delta) << "\n";
  f << "kmax = " << m.kmax << "\n";
  f << "strategy = " << m.strategy << "\n";
  f << "seed = " << m.seed << "\n";
  f << "out_dir = " << m.out_dir << "\n";
  auto write_list = [&](const char* key, const auto& list, auto format) {
    if (list.empty()) return;
    f << key << " =";
    for (const auto& v : list) f << " " << format(v);
    f << "\n";
  };
  write_list("delta_list", m.delta_list, [](double v) { return fmt17(v); });
  write_list("strategy_list", m.strategy_list, [](const std::string& v) { return v; });
  write_list("r0_list", m.r0_list, [](double v) { return fmt17(v); });
  if (!f) throw std::runtime_error("write failed for " + path);
}

SolverConfig to_solver_config(const RunManifest& m, double delta_abs) {
  SolverConfig cfg;
  cfg.eta = m.eta;
  cfg.tau = m.tau;
  cfg.eps = m.eps;
  cfg.p = m.p;
  cfg.alpha0 = m.alpha0;
  cfg.r0 = m.r0;
  cfg.a1 = m.a1;
  cfg.a2 = m.a2;
  cfg.p1 = m.p1;
  cfg.p2 = m.p2;
  cfg.delta = delta_abs;
  cfg.kmax = m.kmax;
  cfg.strategy = strategy_from_string(m.strategy);
  cfg.seed = m.seed;
  return cfg;
}

}  // namespace rrlm
