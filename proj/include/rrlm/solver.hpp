#pragma once

#include "rrlm/problems.hpp"
#include "rrlm/tikhonov.hpp"

#include <string>
#include <vector>

namespace rrlm {

enum class Strategy { adaptive, geometric };
enum class StopReason { discrepancy, kmax, infeasible, domain_violation };

const char* to_string(Strategy s);
const char* to_string(StopReason r);
Strategy strategy_from_string(const std::string& s);

struct SolverConfig {
  double eta = 0.0;    // nonlinearity constant in [0, 1)
  double tau = 0.0;    // discrepancy constant, > (1+eta)/(1-eta)
  double eps = 0.0;    // in (0, [tau(1-eta)-(1+eta)]/(eta tau)) for eta > 0
  double p = 0.0;      // in (0, 1)
  double alpha0 = 0.0; // initial multiplier, > 0
  double r0 = 0.0;     // initial decreasing ratio, in (0, 1)
  double a1 = 2.0;     // ratio correction up, > 1
  double a2 = 0.5;     // ratio correction down, in (0, 1)
  double p1 = 1.0 / 3.0;
  double p2 = 2.0 / 3.0;  // inner interval fractions, 0 < p1 < p2 < 1
  double delta = 0.0;     // absolute noise level |y - y_delta|_Y
  int kmax = 200;
  Strategy strategy = Strategy::adaptive;
  std::uint64_t seed = 0;
  int max_secant = 30;
  double r_max = 0.99;         // ratio clamp keeping r < 1
  double exact_data_tol = 1e-12;  // residual stop when delta == 0
};

/// All run constants used in the numerical experiments: eta as given,
/// tau = 1.3 (1+eta)/(1-eta), p = 0.1, eps = 0.1 [tau(1-eta)-(1+eta)]/(eta tau)
/// (eps = 0.1 for eta = 0), p1 = 1/3, p2 = 2/3, a1 = 2, a2 = 1/2, alpha0 = 2.
SolverConfig paper43_config(double eta = 0.4);

/// Empty when the configuration is admissible; otherwise one message per
/// violated constraint.
std::vector<std::string> validate_config(const SolverConfig& cfg);

struct Bounds {
  double c = 0.0;
  double d = 0.0;
};

/// c = (1+eps) eta residual + (1+eta) delta, d = p c + (1-p) residual.
/// Requires residual > tau delta (the iteration would have stopped otherwise).
Bounds bounds(double residual, const SolverConfig& cfg);

struct InnerBounds {
  double c_hat = 0.0;
  double d_hat = 0.0;
};

/// c_hat = c + p1 (d - c), d_hat = c + p2 (d - c); c < c_hat < d_hat < d.
InnerBounds inner_bounds(double c, double d, const SolverConfig& cfg);

/// Adaptive ratio update from the previous iteration's accepted linearized
/// residual: grow by a1 left of the inner interval, shrink by a2 right of it,
/// keep otherwise; clamped to (0, r_max].
double update_ratio(double prev_linres, double prev_c, double prev_c_hat, double prev_d_hat,
                    double prev_d, double r_prev, const SolverConfig& cfg);

/// Lambda = (C1 + eta)/(1 - eta) with C1 = p (C0 - 1) + 1 and
/// C0 = (1+eps) eta + (1+eta)/tau; per-step residual contraction factor
/// whenever Lambda < 1.
double residual_decay_factor(const SolverConfig& cfg);

struct MultiplierChoice {
  SubproblemResult sub;
  int solves = 0;
  bool secant_used = false;
  bool feasible = true;
};

/// Adaptive: accept alpha_try if H(alpha_try) lands in [c, d], otherwise run
/// the secant search with target (c_hat + d_hat)/2. Geometric: accept
/// alpha_try unconditionally. alpha_fallback (when positive) anchors the
/// search if the direct try itself is numerically unsolvable.
MultiplierChoice choose_multiplier(const LinearOperator& A, const DataVector& b, double alpha_try,
                                   double c, double d, double c_hat, double d_hat,
                                   const SolverConfig& cfg, double alpha_fallback = 0.0);

struct IterationRecord {
  int k = 0;
  double alpha = 0.0;
  double ratio = 0.0;
  double residual = 0.0;  // |F(x_k) - y_delta|_Y before the step
  double linres = 0.0;    // H_k(alpha_k) of the accepted step
  double c = 0.0;
  double d = 0.0;
  double c_hat = 0.0;
  double d_hat = 0.0;
  double rel_error = 0.0;  // 100 |x_k - x*|_X / |x*|_X, NaN when x* unknown
  int subproblem_solves = 0;
  bool secant_used = false;
};

struct RunResult {
  std::vector<ParamVector> iterates;  // x_0 .. x_kstar (or last accepted)
  std::vector<IterationRecord> records;
  int kstar = 0;
  long total_subproblems = 0;
  StopReason stop_reason = StopReason::kmax;
  double final_residual = 0.0;
  double final_rel_error = 0.0;  // NaN when the solution is unknown
};

/// The outer iteration: repeated damped linearized steps with range-checked
/// multipliers and discrepancy stopping (residual stop exact_data_tol when
/// delta == 0). Deterministic given (problem, data, config).
RunResult run(const ProblemInstance& problem, const DataVector& y_delta, const SolverConfig& cfg);

}  // namespace rrlm
