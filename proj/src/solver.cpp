#include "rrlm/solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rrlm {

const char* to_string(Strategy s) {
  return s == Strategy::adaptive ? "adaptive" : "geometric";
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::discrepancy: return "discrepancy";
    case StopReason::kmax: return "kmax";
    case StopReason::infeasible: return "infeasible";
    case StopReason::domain_violation: return "domain-violation";
  }
  return "unknown";
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "adaptive") return Strategy::adaptive;
  if (s == "geometric") return Strategy::geometric;
  throw std::invalid_argument("unknown strategy: " + s);
}

SolverConfig paper43_config(double eta) {
  SolverConfig cfg;
  cfg.eta = eta;
  cfg.tau = 1.3 * (1.0 + eta) / (1.0 - eta);
  cfg.eps = eta > 0.0 ? 0.1 * (cfg.tau * (1.0 - eta) - (1.0 + eta)) / (eta * cfg.tau) : 0.1;
  cfg.p = 0.1;
  cfg.alpha0 = 2.0;
  cfg.r0 = 0.5;
  cfg.a1 = 2.0;
  cfg.a2 = 0.5;
  cfg.p1 = 1.0 / 3.0;
  cfg.p2 = 2.0 / 3.0;
  return cfg;
}

std::vector<std::string> validate_config(const SolverConfig& cfg) {
  std::vector<std::string> v;
  auto fail = [&](const std::string& m) { v.push_back(m); };
  if (!(cfg.eta >= 0.0 && cfg.eta < 1.0)) fail("eta must lie in [0, 1)");
  const double tau_min = (1.0 + cfg.eta) / (1.0 - cfg.eta);
  if (!(cfg.tau > tau_min)) {
    std::ostringstream m;
    m << "tau must exceed (1+eta)/(1-eta) = " << tau_min;
    fail(m.str());
  }
  if (cfg.eta > 0.0) {
    const double eps_max = (cfg.tau * (1.0 - cfg.eta) - (1.0 + cfg.eta)) / (cfg.eta * cfg.tau);
    if (!(cfg.eps > 0.0 && cfg.eps < eps_max)) {
      std::ostringstream m;
      m << "eps must lie in (0, " << eps_max << ")";
      fail(m.str());
    }
  } else if (!(cfg.eps > 0.0)) {
    fail("eps must be positive");
  }
  if (!(cfg.p > 0.0 && cfg.p < 1.0)) fail("p must lie in (0, 1)");
  if (!(cfg.alpha0 > 0.0)) fail("alpha0 must be positive");
  if (!(cfg.r0 > 0.0 && cfg.r0 < 1.0)) fail("r0 must lie in (0, 1)");
  if (!(cfg.a1 > 1.0)) fail("a1 must exceed 1");
  if (!(cfg.a2 > 0.0 && cfg.a2 < 1.0)) fail("a2 must lie in (0, 1)");
  if (!(cfg.p1 > 0.0 && cfg.p1 < cfg.p2 && cfg.p2 < 1.0)) fail("need 0 < p1 < p2 < 1");
  if (!(cfg.delta >= 0.0)) fail("delta must be nonnegative");
  if (cfg.kmax < 1) fail("kmax must be >= 1");
  if (!(cfg.r_max > 0.0 && cfg.r_max < 1.0)) fail("r_max must lie in (0, 1)");
  if (cfg.max_secant < 2) fail("max_secant must be >= 2");
  return v;
}

Bounds bounds(double residual, const SolverConfig& cfg) {
  if (!(residual > cfg.tau * cfg.delta))
    throw std::invalid_argument("bounds: residual is at or below the stopping threshold");
  Bounds b;
  b.c = (1.0 + cfg.eps) * cfg.eta * residual + (1.0 + cfg.eta) * cfg.delta;
  b.d = cfg.p * b.c + (1.0 - cfg.p) * residual;
  return b;
}

InnerBounds inner_bounds(double c, double d, const SolverConfig& cfg) {
  if (!(c < d)) throw std::invalid_argument("inner_bounds: need c < d");
  InnerBounds ib;
  ib.c_hat = c + cfg.p1 * (d - c);
  ib.d_hat = c + cfg.p2 * (d - c);
  return ib;
}

double update_ratio(double prev_linres, double prev_c, double prev_c_hat, double prev_d_hat,
                    double prev_d, double r_prev, const SolverConfig& cfg) {
  if (!(prev_c <= prev_linres && prev_linres <= prev_d))
    throw std::invalid_argument("update_ratio: previous linres must lie in [c, d]");
  double r = r_prev;
  if (prev_linres < prev_c_hat) {
    r = cfg.a1 * r_prev;  // alpha was too small; decrease it slower
  } else if (prev_linres > prev_d_hat) {
    r = cfg.a2 * r_prev;  // alpha was too large; decrease it faster
  }
  return std::min(r, cfg.r_max);
}

double residual_decay_factor(const SolverConfig& cfg) {
  const double c0 = (1.0 + cfg.eps) * cfg.eta + (1.0 + cfg.eta) / cfg.tau;
  const double c1 = cfg.p * (c0 - 1.0) + 1.0;
  return (c1 + cfg.eta) / (1.0 - cfg.eta);
}

MultiplierChoice choose_multiplier(const LinearOperator& A, const DataVector& b, double alpha_try,
                                   double c, double d, double c_hat, double d_hat,
                                   const SolverConfig& cfg, double alpha_fallback) {
  MultiplierChoice out;
  if (cfg.strategy == Strategy::geometric) {
    out.sub = solve_subproblem(A, b, alpha_try);  // failures propagate: no fallback a priori
    out.solves = 1;
    return out;
  }

  bool have_direct = true;
  try {
    out.sub = solve_subproblem(A, b, alpha_try);
  } catch (const std::runtime_error&) {
    have_direct = false;  // unsolvable trial point; hand over to the search
  }
  out.solves = 1;
  if (have_direct && c <= out.sub.linres && out.sub.linres <= d) return out;

  const double target = 0.5 * (c_hat + d_hat);
  const double anchor =
      have_direct ? alpha_try : (alpha_fallback > 0.0 ? alpha_fallback : 1.0);
  IntervalResult ir = interval_search(A, b, c, d, anchor, target, cfg.max_secant,
                                      have_direct ? &out.sub : nullptr);
  out.solves += ir.solves;
  out.secant_used = true;
  if (ir.status == IntervalStatus::found) {
    ir.sub.inner_iters += have_direct ? out.sub.inner_iters : 0;
    out.sub = std::move(ir.sub);
    return out;
  }
  out.feasible = false;
  return out;
}

RunResult run(const ProblemInstance& problem, const DataVector& y_delta, const SolverConfig& cfg) {
  {
    const auto violations = validate_config(cfg);
    if (!violations.empty()) {
      std::string msg = "run: invalid configuration:";
      for (const auto& m : violations) msg += " " + m + ";";
      throw std::invalid_argument(msg);
    }
  }
  if (y_delta.size() != problem.y_ip.dim())
    throw std::invalid_argument("run: data length does not match the problem");

  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto rel_error = [&](const ParamVector& x) -> double {
    if (!problem.known_solution) return nan;
    const double denom = problem.x_ip.norm(*problem.known_solution);
    return 100.0 * problem.x_ip.norm(x - *problem.known_solution) / denom;
  };

  RunResult out;
  ParamVector x = problem.initial_guess;
  if (!problem.domain_check(x))
    throw std::invalid_argument("run: the initial guess violates the domain");
  DataVector fx = problem.forward(x);
  double res = problem.y_ip.norm(y_delta - fx);
  const double stop = cfg.delta > 0.0 ? cfg.tau * cfg.delta : cfg.exact_data_tol;

  out.iterates.push_back(x);
  auto finish = [&](StopReason reason, int kstar) -> RunResult {
    out.stop_reason = reason;
    out.kstar = kstar;
    out.final_residual = res;
    out.final_rel_error = rel_error(x);
    return std::move(out);
  };

  if (res <= stop) return finish(StopReason::discrepancy, 0);

  double r = cfg.r0;
  double alpha_prev = 0.0;
  for (int k = 0; k < cfg.kmax; ++k) {
    const auto jac = problem.jacobian_at(x);
    const DataVector b = y_delta - fx;
    const Bounds bd = bounds(res, cfg);
    const InnerBounds ib = inner_bounds(bd.c, bd.d, cfg);

    double alpha_try;
    if (k == 0) {
      alpha_try = cfg.alpha0;
    } else {
      if (k >= 2 && cfg.strategy == Strategy::adaptive) {
        const IterationRecord& prev = out.records.back();
        r = update_ratio(prev.linres, prev.c, prev.c_hat, prev.d_hat, prev.d, r, cfg);
      }
      alpha_try = r * alpha_prev;
    }

    const double anchor = k == 0 ? cfg.alpha0 : alpha_prev;
    MultiplierChoice choice =
        choose_multiplier(*jac, b, alpha_try, bd.c, bd.d, ib.c_hat, ib.d_hat, cfg, anchor);
    out.total_subproblems += choice.solves;
    if (!choice.feasible) return finish(StopReason::infeasible, k);
    alpha_prev = choice.sub.alpha;

    out.records.push_back(IterationRecord{k, choice.sub.alpha, r, res, choice.sub.linres, bd.c,
                                          bd.d, ib.c_hat, ib.d_hat, rel_error(x), choice.solves,
                                          choice.secant_used});

    const ParamVector x_next = x + choice.sub.step;
    if (!problem.domain_check(x_next)) return finish(StopReason::domain_violation, k);

    x = x_next;
    out.iterates.push_back(x);
    fx = problem.forward(x);
    res = problem.y_ip.norm(y_delta - fx);
    if (res <= stop) return finish(StopReason::discrepancy, k + 1);
  }
  return finish(StopReason::kmax, cfg.kmax);
}

}  // namespace rrlm
