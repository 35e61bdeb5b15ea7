#pragma once

#include "rrlm/solver.hpp"

#include <string>
#include <vector>

namespace rrlm {

/// Per-iteration CSV: header row, comma separated, '.' decimal point,
/// 17 significant digits, flags as 0/1, absent errors as nan.
void write_iterations_csv(const std::string& path, const std::vector<IterationRecord>& records);
std::vector<IterationRecord> read_iterations_csv(const std::string& path);

struct RunSummary {
  int kstar = 0;
  long total_subproblems = 0;
  double final_rel_error = 0.0;
  double final_residual = 0.0;
  StopReason stop_reason = StopReason::kmax;
  double delta_abs = 0.0;
};

RunSummary summarize(const RunResult& result, double delta_abs);
void write_summary(const std::string& path, const RunSummary& s);
RunSummary read_summary(const std::string& path);

/// Exit code contract of the solve command: 0 discrepancy, 2 kmax,
/// 3 infeasible, 4 domain violation.
int exit_code_for(StopReason r);

void write_vector(const std::string& path, const Eigen::VectorXd& v);
Eigen::VectorXd read_vector(const std::string& path);

struct SweepRow {
  double delta = 0.0;       // relative noise level
  std::string strategy;
  double r0 = 0.0;
  bool failed = false;      // the run itself errored out
  std::string error;
  RunSummary summary;
};

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

/// Plot-ready column files from completed run directories: residual, error
/// and multiplier against k, plus the linearized residual with its interval
/// bounds. Runs are aligned on k and padded with nan past their last row.
void write_report(const std::vector<std::string>& run_dirs, const std::string& out_dir);

}  // namespace rrlm
