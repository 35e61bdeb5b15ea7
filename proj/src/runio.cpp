#include "rrlm/runio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rrlm {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

StopReason stop_reason_from_string(const std::string& s) {
  if (s == "discrepancy") return StopReason::discrepancy;
  if (s == "kmax") return StopReason::kmax;
  if (s == "infeasible") return StopReason::infeasible;
  if (s == "domain-violation") return StopReason::domain_violation;
  throw std::runtime_error("unknown stop reason: " + s);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

constexpr const char* kCsvHeader =
    "k,alpha,ratio,residual,linres,c,d,c_hat,d_hat,rel_error,subproblem_solves,secant_used";

}  // namespace

void write_iterations_csv(const std::string& path, const std::vector<IterationRecord>& records) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << kCsvHeader << "\n";
  for (const auto& r : records) {
    f << r.k << ',' << fmt17(r.alpha) << ',' << fmt17(r.ratio) << ',' << fmt17(r.residual) << ','
      << fmt17(r.linres) << ',' << fmt17(r.c) << ',' << fmt17(r.d) << ',' << fmt17(r.c_hat) << ','
      << fmt17(r.d_hat) << ',' << fmt17(r.rel_error) << ',' << r.subproblem_solves << ','
      << (r.secant_used ? 1 : 0) << "\n";
  }
  if (!f) throw std::runtime_error("write failed for " + path);
}

std::vector<IterationRecord> read_iterations_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(f, line) || line != kCsvHeader)
    throw std::runtime_error(path + ": unexpected CSV header");
  std::vector<IterationRecord> out;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 12) throw std::runtime_error(path + ": malformed CSV row");
    IterationRecord r;
    r.k = std::stoi(cells[0]);
    r.alpha = std::stod(cells[1]);
    r.ratio = std::stod(cells[2]);
    r.residual = std::stod(cells[3]);
    r.linres = std::stod(cells[4]);
    r.c = std::stod(cells[5]);
    r.d = std::stod(cells[6]);
    r.c_hat = std::stod(cells[7]);
    r.d_hat = std::stod(cells[8]);
    r.rel_error = std::stod(cells[9]);
    r.subproblem_solves = std::stoi(cells[10]);
    r.secant_used = cells[11] == "1";
    out.push_back(r);
  }
  return out;
}

RunSummary summarize(const RunResult& result, double delta_abs) {
  RunSummary s;
  s.kstar = result.kstar;
  s.total_subproblems = result.total_subproblems;
  s.final_rel_error = result.final_rel_error;
  s.final_residual = result.final_residual;
  s.stop_reason = result.stop_reason;
  s.delta_abs = delta_abs;
  return s;
}

void write_summary(const std::string& path, const RunSummary& s) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "kstar = " << s.kstar << "\n";
  f << "total_subproblems = " << s.total_subproblems << "\n";
  f << "final_rel_error = " << fmt17(s.final_rel_error) << "\n";
  f << "final_residual = " << fmt17(s.final_residual) << "\n";
  f << "stop_reason = " << to_string(s.stop_reason) << "\n";
  f << "exit_code = " << exit_code_for(s.stop_reason) << "\n";
  f << "delta_abs = " << fmt17(s.delta_abs) << "\n";
  if (!f) throw std::runtime_error("write failed for " + path);
}

RunSummary read_summary(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  RunSummary s;
  std::string line;
  while (std::getline(f, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, line.find_last_not_of(" \t", eq - 1) + 1);
    const std::string val = line.substr(line.find_first_not_of(" \t", eq + 1));
    if (key == "kstar") s.kstar = std::stoi(val);
    else if (key == "total_subproblems") s.total_subproblems = std::stol(val);
    else if (key == "final_rel_error") s.final_rel_error = std::stod(val);
    else if (key == "final_residual") s.final_residual = std::stod(val);
    else if (key == "stop_reason") s.stop_reason = stop_reason_from_string(val);
    else if (key == "delta_abs") s.delta_abs = std::stod(val);
  }
  return s;
}

int exit_code_for(StopReason r) {
  switch (r) {
    case StopReason::discrepancy: return 0;
    case StopReason::kmax: return 2;
    case StopReason::infeasible: return 3;
    case StopReason::domain_violation: return 4;
  }
  return 1;
}

void write_vector(const std::string& path, const Eigen::VectorXd& v) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  for (Eigen::Index i = 0; i < v.size(); ++i) f << fmt17(v[i]) << "\n";
  if (!f) throw std::runtime_error("write failed for " + path);
}

Eigen::VectorXd read_vector(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::vector<double> vals;
  double v;
  while (f >> v) vals.push_back(v);
  return Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "delta,strategy,r0,kstar,total_subproblems,final_rel_error,final_residual,stop_reason,"
       "error\n";
  for (const auto& r : rows) {
    f << fmt17(r.delta) << ',' << r.strategy << ',' << fmt17(r.r0) << ',';
    if (r.failed) {
      f << ",,,,failed," << r.error << "\n";
    } else {
      f << r.summary.kstar << ',' << r.summary.total_subproblems << ','
        << fmt17(r.summary.final_rel_error) << ',' << fmt17(r.summary.final_residual) << ','
        << to_string(r.summary.stop_reason) << ",\n";
    }
  }
  if (!f) throw std::runtime_error("write failed for " + path);
}

void write_report(const std::vector<std::string>& run_dirs, const std::string& out_dir) {
  if (run_dirs.empty()) throw std::invalid_argument("report: no run directories given");
  struct Run {
    std::vector<IterationRecord> records;
    RunSummary summary;
  };
  std::vector<Run> runs;
  for (const auto& dir : run_dirs) {
    Run r;
    r.records = read_iterations_csv(dir + "/iterations.csv");
    r.summary = read_summary(dir + "/summary.txt");
    if (r.records.empty()) throw std::runtime_error("report: no iterations in " + dir);
    runs.push_back(std::move(r));
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::size_t kmax_records = 0;
  for (const auto& r : runs) kmax_records = std::max(kmax_records, r.records.size());

  auto open = [&](const std::string& name, const std::string& cols_per_run) {
    std::ofstream f(out_dir + "/" + name);
    if (!f) throw std::runtime_error("cannot write " + out_dir + "/" + name);
    f << "# k";
    for (std::size_t i = 0; i < runs.size(); ++i) f << " " << cols_per_run << i;
    f << "\n";
    return f;
  };

  // residual and error extend to the final iterate; alpha and the interval
  // overlay exist per executed iteration only
  {
    std::ofstream f = open("residual_vs_k.txt", "residual_run");
    for (std::size_t k = 0; k <= kmax_records; ++k) {
      f << k;
      for (const auto& r : runs) {
        double v = nan;
        if (k < r.records.size()) v = r.records[k].residual;
        else if (k == r.records.size()) v = r.summary.final_residual;
        f << " " << fmt17(v);
      }
      f << "\n";
    }
  }
  {
    std::ofstream f = open("error_vs_k.txt", "rel_error_run");
    for (std::size_t k = 0; k <= kmax_records; ++k) {
      f << k;
      for (const auto& r : runs) {
        double v = nan;
        if (k < r.records.size()) v = r.records[k].rel_error;
        else if (k == r.records.size()) v = r.summary.final_rel_error;
        f << " " << fmt17(v);
      }
      f << "\n";
    }
  }
  {
    std::ofstream f = open("alpha_vs_k.txt", "alpha_run");
    for (std::size_t k = 0; k < kmax_records; ++k) {
      f << k;
      for (const auto& r : runs)
        f << " " << fmt17(k < r.records.size() ? r.records[k].alpha : nan);
      f << "\n";
    }
  }
  {
    std::ofstream f(out_dir + "/linres_bounds_vs_k.txt");
    if (!f) throw std::runtime_error("cannot write " + out_dir + "/linres_bounds_vs_k.txt");
    f << "# k";
    for (std::size_t i = 0; i < runs.size(); ++i)
      f << " linres_run" << i << " c_run" << i << " d_run" << i;
    f << "\n";
    for (std::size_t k = 0; k < kmax_records; ++k) {
      f << k;
      for (const auto& r : runs) {
        if (k < r.records.size())
          f << " " << fmt17(r.records[k].linres) << " " << fmt17(r.records[k].c) << " "
            << fmt17(r.records[k].d);
        else
          f << " " << fmt17(nan) << " " << fmt17(nan) << " " << fmt17(nan);
      }
      f << "\n";
    }
  }
}

}  // namespace rrlm
