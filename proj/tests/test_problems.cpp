#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rrlm/problems.hpp"
#include "rrlm/solver.hpp"

#include <cmath>
#include <iostream>

using namespace rrlm;

namespace {

// observed convergence order of |F(x+th) - F(x) - t F'(x) h| over decreasing t;
// returns a large order when the defect is already at rounding level (linear maps)
double taylor_order(const ProblemInstance& p, const ParamVector& x, const ParamVector& h,
                    const std::vector<double>& ts) {
  const DataVector fx = p.forward(x);
  const auto jac = p.jacobian_at(x);
  const DataVector jh = jac->apply(h);
  const double scale = p.y_ip.norm(fx) + p.y_ip.norm(jh) + 1e-30;
  std::vector<double> errs;
  for (double t : ts) errs.push_back(p.y_ip.norm(p.forward(x + t * h) - fx - t * jh));
  double worst = 100.0;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (errs[i - 1] < 1e-13 * scale && errs[i] < 1e-13 * scale) continue;
    worst = std::min(worst, std::log(errs[i - 1] / errs[i]) / std::log(ts[i - 1] / ts[i]));
  }
  return worst;
}

}  // namespace

TEST_CASE("linear diagonal entries and constant jacobian") {
  const auto p = linear_diagonal(3, 1.0);
  Eigen::Vector3d x(1, 1, 1);
  const DataVector y = p.forward(x);
  CHECK(y[0] == 1.0);
  CHECK(y[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(y[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const auto j1 = p.jacobian_at(Eigen::Vector3d(0, 0, 0));
  const auto j2 = p.jacobian_at(Eigen::Vector3d(5, -2, 1));
  Rng rng(4);
  const Eigen::VectorXd h = rng.symmetric_vec(3);
  CHECK((j1->apply(h) - j2->apply(h)).norm() == 0.0);
}

TEST_CASE("synthetic problems pass adjoint and taylor checks") {
  for (const auto& p : {linear_diagonal(20, 1.0), nonlinear_exp(20, 1.0)}) {
    const auto jac = p.jacobian_at(p.initial_guess);
    CHECK(adjoint_mismatch(*jac, 25, 7) <= 1e-12);
    Rng rng(8);
    const ParamVector h = rng.symmetric_vec(p.dim_x);
    const double order =
        taylor_order(p, p.initial_guess, h, {1e-1, 1e-2, 1e-3, 1e-4});
    CHECK(order >= 1.9);
  }
}

TEST_CASE("nonlinear_exp value and domain guard") {
  const auto p = nonlinear_exp(4, 1.0);
  const DataVector y0 = p.forward(Eigen::VectorXd::Zero(4));
  for (int i = 0; i < 4; ++i) CHECK(y0[i] == doctest::Approx(1.0 / (i + 1)).epsilon(1e-15));

  Eigen::VectorXd far = Eigen::VectorXd::Zero(4);
  far[2] = 50.5;
  CHECK_FALSE(p.domain_check(far));
  far[2] = 49.5;
  CHECK(p.domain_check(far));
}

TEST_CASE("measured nonlinearity of nonlinear_exp stays below the configured constant") {
  const auto p = nonlinear_exp(20, 1.0);
  const double radius = 1.1 * p.x_ip.norm(p.initial_guess - *p.known_solution);
  const double eta_hat = empirical_eta(p, radius, 200, 13);
  std::cout << "nonlinear_exp measured eta on radius " << radius << ": " << eta_hat << "\n";
  CHECK(eta_hat < p.eta_hint);
  CHECK(eta_hat > 0.0);
}

TEST_CASE("relative noise has the advertised norm and is deterministic") {
  const auto p = linear_diagonal(30, 1.0);
  const DataVector y = p.forward(*p.known_solution);
  const auto n1 = add_relative_noise(y, 0.01, p.y_ip, 5);
  const auto n2 = add_relative_noise(y, 0.01, p.y_ip, 5);
  CHECK((n1.y_delta - n2.y_delta).norm() == 0.0);
  CHECK(p.y_ip.norm(n1.y_delta - y) == doctest::Approx(0.01 * p.y_ip.norm(y)).epsilon(1e-12));
  CHECK(n1.delta_abs == doctest::Approx(0.01 * p.y_ip.norm(y)).epsilon(1e-15));
  const auto clean = add_relative_noise(y, 0.0, p.y_ip, 5);
  CHECK((clean.y_delta - y).norm() == 0.0);
}

TEST_CASE("on linear problems the next residual equals the linearized residual") {
  const auto p = linear_diagonal(20, 1.0);
  const DataVector y = p.forward(*p.known_solution);
  const auto noisy = add_relative_noise(y, 0.01, p.y_ip, 11);
  SolverConfig cfg = paper43_config(0.0);
  cfg.delta = noisy.delta_abs;
  cfg.r0 = 0.5;
  const RunResult result = run(p, noisy.y_delta, cfg);
  REQUIRE(result.stop_reason == StopReason::discrepancy);
  REQUIRE(result.records.size() >= 2);
  for (std::size_t k = 0; k + 1 < result.records.size(); ++k) {
    // residual recorded at k+1 is |F x_{k+1} - y_delta|, the linear identity
    CHECK(result.records[k + 1].residual ==
          doctest::Approx(result.records[k].linres).epsilon(1e-10));
    CHECK(result.records[k].linres >= result.records[k].c);
    CHECK(result.records[k].linres <= result.records[k].d);
  }
  CHECK(result.final_residual ==
        doctest::Approx(result.records.back().linres).epsilon(1e-10));
}
