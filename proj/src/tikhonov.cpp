#include "rrlm/tikhonov.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rrlm {

namespace {
constexpr double kAlphaMin = 1e-14;
constexpr double kAlphaMax = 1e14;
}  // namespace

SubproblemResult solve_subproblem(const LinearOperator& A, const DataVector& b, double alpha,
                                  const CgOptions& opts) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("solve_subproblem: alpha must be positive and finite");
  const InnerProduct& X = A.domain_ip();
  const InnerProduct& Y = A.codomain_ip();
  if (b.size() != Y.dim())
    throw std::invalid_argument("solve_subproblem: data length does not match operator codomain");

  const Eigen::VectorXd rhs = X.apply_weight(A.apply_adjoint(b));
  auto normal_op = [&](const Eigen::VectorXd& h) {
    return X.apply_weight(A.apply_adjoint(A.apply(h)) + alpha * h);
  };

  CgResult cg = cg_solve(normal_op, rhs, opts.tol, opts.maxit);
  if (!cg.converged && cg.rel_residual > opts.accept_tol) {
    std::ostringstream msg;
    msg << "solve_subproblem: CG did not converge (relative residual " << cg.rel_residual
        << " after " << cg.iterations << " iterations, alpha " << alpha << ")";
    throw std::runtime_error(msg.str());
  }

  SubproblemResult out;
  out.alpha = alpha;
  out.step = std::move(cg.x);
  out.linres = Y.norm(A.apply(out.step) - b);
  out.inner_iters = cg.iterations;
  return out;
}

std::vector<double> linres_profile(const LinearOperator& A, const DataVector& b,
                                   const std::vector<double>& alphas, const CgOptions& opts) {
  std::vector<double> out;
  out.reserve(alphas.size());
  for (double a : alphas) out.push_back(solve_subproblem(A, b, a, opts).linres);
  return out;
}

IntervalResult interval_search(const LinearOperator& A, const DataVector& b, double c, double d,
                               double alpha_init, double target, int max_secant,
                               const SubproblemResult* first_eval, const CgOptions& opts) {
  const double bnorm = A.codomain_ip().norm(b);
  if (!(0.0 <= c && c < d))
    throw std::invalid_argument("interval_search: need 0 <= c < d");
  if (!(d < bnorm))
    throw std::invalid_argument("interval_search: interval must lie below |b| (H(alpha) < |b|)");
  if (!(c < target && target < d))
    throw std::invalid_argument("interval_search: target must lie inside (c, d)");
  if (!(alpha_init > 0.0)) throw std::invalid_argument("interval_search: alpha_init must be positive");
  if (max_secant < 2) throw std::invalid_argument("interval_search: max_secant must be >= 2");

  IntervalResult out;
  int inner_total = 0;
  bool first_used = false;
  bool eval_failed = false;
  auto eval = [&](double a) -> SubproblemResult {
    if (first_eval != nullptr && !first_used && first_eval->alpha == a) {
      first_used = true;
      return *first_eval;  // caller already paid for this solve
    }
    // an exploratory point where the inner CG cannot reach its accuracy is
    // discarded; the search gives up rather than aborting the outer run
    try {
      SubproblemResult s = solve_subproblem(A, b, a, opts);
      ++out.solves;
      inner_total += s.inner_iters;
      return s;
    } catch (const std::runtime_error&) {
      ++out.solves;
      eval_failed = true;
      return {};
    }
  };
  auto inside = [&](const SubproblemResult& s) { return c <= s.linres && s.linres <= d; };
  auto accept = [&](SubproblemResult s) {
    s.inner_iters = inner_total;
    out.status = IntervalStatus::found;
    out.sub = std::move(s);
    return out;
  };
  auto clamp_alpha = [](double a) { return std::min(std::max(a, kAlphaMin), kAlphaMax); };

  const double t_min = std::log(kAlphaMin);
  const double t_max = std::log(kAlphaMax);

  // H is increasing in alpha, so g(t) = H(exp(t)) - target is increasing:
  // a sign change brackets the target. The secant step is safeguarded by
  // bisection inside a known bracket and geometric expansion outside it.
  double t_lo = -std::numeric_limits<double>::infinity();  // largest t with g < 0
  double t_hi = std::numeric_limits<double>::infinity();   // smallest t with g > 0
  auto note_sign = [&](double t, double g) {
    if (g < 0) t_lo = std::max(t_lo, t);
    else t_hi = std::min(t_hi, t);
  };

  const double a0 = clamp_alpha(alpha_init);
  SubproblemResult s0 = eval(a0);
  if (eval_failed) return out;  // exhausted
  if (inside(s0)) return accept(std::move(s0));
  double t0 = std::log(a0), g0 = s0.linres - target;
  note_sign(t0, g0);
  if (a0 <= kAlphaMin * (1.0 + 1e-12) && s0.linres > d) {
    out.status = IntervalStatus::infeasible;
    return out;
  }

  // second point two decades toward the target; a fixed upward step wastes a
  // solve whenever the first point already saturates above the target
  double a1 = clamp_alpha(g0 > 0 ? alpha_init / 100.0 : alpha_init * 100.0);
  if (a1 == a0) a1 = clamp_alpha(g0 > 0 ? alpha_init * 2.0 : alpha_init * 0.5);
  SubproblemResult s1 = eval(a1);
  if (eval_failed) return out;
  if (inside(s1)) return accept(std::move(s1));
  double t1 = std::log(a1), g1 = s1.linres - target;
  note_sign(t1, g1);

  const double max_jump = std::log(100.0);  // at most two decades per step
  while (out.solves < max_secant) {
    double t2 = std::numeric_limits<double>::quiet_NaN();
    if (g1 != g0) t2 = t1 - g1 * (t1 - t0) / (g1 - g0);
    const bool bracketed = std::isfinite(t_lo) && std::isfinite(t_hi);
    if (bracketed) {
      if (!std::isfinite(t2) || t2 <= t_lo || t2 >= t_hi) t2 = 0.5 * (t_lo + t_hi);
    } else {
      // no sign change seen yet; a shallow local slope makes the raw secant
      // overshoot by many decades, so cap the move
      if (!std::isfinite(t2)) t2 = g1 > 0 ? t1 - max_jump : t1 + max_jump;
      t2 = std::min(std::max(t2, t1 - max_jump), t1 + max_jump);
    }
    t2 = std::min(std::max(t2, t_min), t_max);
    if (t2 == t1 || t2 == t0) {
      // pinned: at the bottom clamp H is numerically at its infimum
      if (t2 <= t_min + 1e-12 && g1 > 0 && s1.linres > d) out.status = IntervalStatus::infeasible;
      return out;
    }
    const double a2 = std::exp(t2);
    SubproblemResult s2 = eval(a2);
    if (eval_failed) return out;
    if (inside(s2)) return accept(std::move(s2));
    const double g2 = s2.linres - target;
    note_sign(t2, g2);
    // still above the interval with alpha at its floor: the infimum of H
    // cannot reach below d, no admissible multiplier exists
    if (a2 <= kAlphaMin * (1.0 + 1e-12) && s2.linres > d) {
      out.status = IntervalStatus::infeasible;
      return out;
    }
    t0 = t1;
    g0 = g1;
    t1 = t2;
    g1 = g2;
    s1 = std::move(s2);
  }
  out.status = IntervalStatus::exhausted;
  return out;
}

}  // namespace rrlm
