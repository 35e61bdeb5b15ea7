#pragma once

#include "rrlm/solver.hpp"

#include <string>
#include <vector>

namespace rrlm {

/// Everything needed to reproduce a run: problem selection, mesh presets,
/// solver constants, noise level, seed and output directory. Serialized as
/// line-oriented `key = value` text; floats carry 17 significant digits so a
/// manifest round-trips without loss.
struct RunManifest {
  std::string problem = "eit";  // eit | linear_diagonal | nonlinear_exp
  int mesh_n = 16;
  int data_mesh_n = 32;
  int problem_n = 20;     // synthetic problem dimension
  double problem_s = 1.0; // diagonal decay exponent
  double gamma_min = 1e-3;

  double eta = 0.4;
  double tau = 0.0;  // filled by the constructor from the standard run constants
  double eps = 0.0;
  double p = 0.1;
  double alpha0 = 2.0;
  double r0 = 0.5;
  double a1 = 2.0;
  double a2 = 0.5;
  double p1 = 1.0 / 3.0;
  double p2 = 2.0 / 3.0;

  double delta = 0.001;  // relative noise level
  int kmax = 200;
  std::string strategy = "adaptive";
  std::uint64_t seed = 1;
  std::string out_dir = "out";

  // sweep controls; empty lists fall back to the scalar fields
  std::vector<double> delta_list;
  std::vector<std::string> strategy_list;
  std::vector<double> r0_list;

  RunManifest();
};

/// desk: inversion mesh n = 16, data mesh n = 32. paper43: n = 27 / 54.
/// Both use the standard run constants for eta = 0.4.
RunManifest preset(const std::string& name);

/// Parse `key = value` lines into an existing manifest ('#' starts a comment;
/// unknown keys are rejected).
void parse_manifest(const std::string& path, RunManifest& m);
RunManifest parse_manifest(const std::string& path);

void write_manifest(const RunManifest& m, const std::string& path);

/// Solver configuration for one run; delta_abs is the absolute noise level
/// of the data set being solved.
SolverConfig to_solver_config(const RunManifest& m, double delta_abs);

}  // namespace rrlm
