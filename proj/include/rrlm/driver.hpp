#pragma once

#include "rrlm/eit/forward.hpp"
#include "rrlm/manifest.hpp"
#include "rrlm/runio.hpp"

#include <memory>
#include <string>

namespace rrlm {

struct BuiltProblem {
  ProblemInstance problem;
  std::shared_ptr<const eit::TriMesh> mesh;  // null for synthetic problems
};

/// Instantiate the problem named by the manifest (eit, linear_diagonal or
/// nonlinear_exp). Deterministic.
BuiltProblem build_problem(const RunManifest& m);

struct SimulatedRun {
  DataVector y;
  DataVector y_delta;
  double delta_abs = 0.0;
};

/// Exact plus noisy data for the manifest's problem and noise level.
SimulatedRun simulate_for(const RunManifest& m, const BuiltProblem& built);

/// simulate: writes y.txt, y_delta.txt, sim_meta.txt, manifest.txt (and the
/// inversion mesh for eit) into out_dir. Returns 0 on success.
int cmd_simulate(const RunManifest& m);

/// solve: reads the simulated data from out_dir, runs the solver and writes
/// iterations.csv + summary.txt. Returns the stop-reason exit code.
int cmd_solve(const RunManifest& m);

/// sweep: one (delta, strategy, r0) run per combination of the manifest's
/// lists, each in its own subdirectory; failures are recorded per row and the
/// sweep continues. Writes sweep.csv. Returns 0 when every row completed.
int cmd_sweep(const RunManifest& m);

/// report: plot-ready column files aggregated from completed run dirs.
int cmd_report(const std::vector<std::string>& run_dirs, const std::string& out_dir);

}  // namespace rrlm
