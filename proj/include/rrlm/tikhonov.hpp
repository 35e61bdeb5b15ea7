#pragma once

#include "rrlm/linalg.hpp"

#include <vector>

namespace rrlm {

struct CgOptions {
  double tol = 1e-12;        // requested relative residual of the inner CG
  double accept_tol = 1e-9;  // stagnating above this is reported as non-convergence
  int maxit = -1;            // <= 0 selects 10 * n
};

struct SubproblemResult {
  double alpha = 0.0;
  ParamVector step;      // h minimizing |A h - b|_Y^2 + alpha |h|_X^2
  double linres = 0.0;   // H(alpha) = |A h - b|_Y evaluated at the returned step
  int inner_iters = 0;   // CG iterations spent (accumulated across an interval search)
};

/// Damped linearized subproblem: CG on the weighted normal equations
/// (A^T Wy A + alpha Wx) h = A^T Wy b.
SubproblemResult solve_subproblem(const LinearOperator& A, const DataVector& b, double alpha,
                                  const CgOptions& opts = {});

/// H(alpha) for each entry of alphas (entries must be positive).
std::vector<double> linres_profile(const LinearOperator& A, const DataVector& b,
                                   const std::vector<double>& alphas, const CgOptions& opts = {});

enum class IntervalStatus { found, infeasible, exhausted };

struct IntervalResult {
  IntervalStatus status = IntervalStatus::exhausted;
  SubproblemResult sub;  // valid when status == found
  int solves = 0;        // Tikhonov subproblems spent by the search
};

/// Hunt for alpha with H(alpha) in [c, d]. Secant iteration runs on log(alpha)
/// against H(alpha) - target, with alpha clamped to [1e-14, 1e14]; every
/// iterate landing inside [c, d] is accepted immediately. first_eval, when it
/// matches alpha_init, is reused instead of being solved again (and is not
/// counted in solves).
IntervalResult interval_search(const LinearOperator& A, const DataVector& b, double c, double d,
                               double alpha_init, double target, int max_secant = 30,
                               const SubproblemResult* first_eval = nullptr,
                               const CgOptions& opts = {});

}  // namespace rrlm
