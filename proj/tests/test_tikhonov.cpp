#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rrlm/tikhonov.hpp"

#include <cmath>

using namespace rrlm;

namespace {

DenseOperator identity_op(int n) {
  return DenseOperator::diagonal(Eigen::VectorXd::Ones(n));
}

// closed form for diagonal operators: h_i = a_i b_i / (a_i^2 + alpha)
Eigen::VectorXd diagonal_solution(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                  double alpha) {
  return (a.array() * b.array() / (a.array().square() + alpha)).matrix();
}

Eigen::VectorXd random_diag(int n, Rng& rng, double lo, double hi) {
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d[i] = lo + (hi - lo) * rng.unit();
  return d;
}

}  // namespace

TEST_CASE("subproblem with the identity shrinks by 1/(1+alpha)") {
  const auto op = identity_op(4);
  Eigen::VectorXd b(4);
  b << 1, -2, 0.5, 3;
  const auto res = solve_subproblem(op, b, 1.0);
  CHECK((res.step - 0.5 * b).norm() < 1e-12);
  CHECK(res.linres == doctest::Approx(0.5 * b.norm()).epsilon(1e-12));
}

TEST_CASE("subproblem linres approaches |b| for huge alpha") {
  const auto op = identity_op(5);
  Eigen::VectorXd b(5);
  b << 0.3, -1.2, 2.0, 0.1, -0.4;
  const auto res = solve_subproblem(op, b, 1e8);
  CHECK(res.linres >= 0.999 * b.norm());
  CHECK(res.linres < b.norm());
}

TEST_CASE("subproblem matches the diagonal closed form") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.unit() * 48);
    const Eigen::VectorXd a = random_diag(n, rng, 0.05, 2.0);
    const Eigen::VectorXd b = rng.symmetric_vec(n);
    const double alpha = std::pow(10.0, -2.0 + 3.0 * rng.unit());
    const auto op = DenseOperator::diagonal(a);
    const auto res = solve_subproblem(op, b, alpha);
    const Eigen::VectorXd exact = diagonal_solution(a, b, alpha);
    CHECK((res.step - exact).norm() / exact.norm() < 1e-10);
    CHECK(res.linres == doctest::Approx((a.asDiagonal() * res.step - b).norm()).epsilon(1e-10));
  }
}

TEST_CASE("subproblem optimality residual stays below 1e-9 relative") {
  Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const int nx = 8, ny = 10;
    Eigen::MatrixXd m(ny, nx);
    for (int i = 0; i < ny; ++i)
      for (int j = 0; j < nx; ++j) m(i, j) = rng.symmetric();
    const auto wx = random_diag(nx, rng, 0.3, 2.0);
    const auto wy = random_diag(ny, rng, 0.3, 2.0);
    const DenseOperator op(m, InnerProduct::weighted(wx), InnerProduct::weighted(wy));
    const Eigen::VectorXd b = rng.symmetric_vec(ny);
    const double alpha = 0.3;
    const auto res = solve_subproblem(op, b, alpha);
    const Eigen::VectorXd opt =
        op.apply_adjoint(op.apply(res.step) - b) + alpha * res.step;
    CHECK(op.domain_ip().norm(opt) <= 1e-9 * op.domain_ip().norm(op.apply_adjoint(b)));
  }
}

TEST_CASE("subproblem rejects bad alpha") {
  const auto op = identity_op(3);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(solve_subproblem(op, b, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_subproblem(op, b, -1.0), std::invalid_argument);
}

TEST_CASE("linres profile of the identity is alpha/(1+alpha)") {
  const auto op = identity_op(6);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(6);
  b[0] = 1.0;  // unit norm
  const auto prof = linres_profile(op, b, {1.0, 2.0, 3.0});
  CHECK(prof[0] == doctest::Approx(1.0 / 2.0).epsilon(1e-12));
  CHECK(prof[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(prof[2] == doctest::Approx(3.0 / 4.0).epsilon(1e-12));
}

TEST_CASE("linres profile is strictly increasing over four decades") {
  Rng rng(77);
  const Eigen::VectorXd a = random_diag(12, rng, 0.05, 1.5);
  const auto op = DenseOperator::diagonal(a);
  const Eigen::VectorXd b = rng.symmetric_vec(12);
  std::vector<double> alphas;
  for (int i = 0; i < 10; ++i) alphas.push_back(std::pow(10.0, -2.0 + 4.0 * i / 9.0));
  const auto prof = linres_profile(op, b, alphas);
  for (std::size_t i = 1; i < prof.size(); ++i) CHECK(prof[i] > prof[i - 1] - 1e-12);
}

TEST_CASE("linres tends to the infimum for vanishing alpha on full-rank operators") {
  Rng rng(78);
  const Eigen::VectorXd a = random_diag(8, rng, 0.5, 2.0);
  const auto op = DenseOperator::diagonal(a);
  const Eigen::VectorXd b = rng.symmetric_vec(8);
  const auto res = solve_subproblem(op, b, 1e-10);
  CHECK(res.linres < 1e-8 * b.norm());  // inf over a full-rank square system is 0
}

// |w|^2 - |w-h|^2 == |h|^2 + (1/a)[|Ah-b|^2 - |Aw-b|^2] + (1/a)|A(w-h)|^2
TEST_CASE("descent identity on random weighted instances") {
  Rng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const int nx = 6, ny = 9;
    Eigen::MatrixXd m(ny, nx);
    for (int i = 0; i < ny; ++i)
      for (int j = 0; j < nx; ++j) m(i, j) = rng.symmetric();
    const auto wx = random_diag(nx, rng, 0.4, 1.8);
    const auto wy = random_diag(ny, rng, 0.4, 1.8);
    const DenseOperator op(m, InnerProduct::weighted(wx), InnerProduct::weighted(wy));
    const Eigen::VectorXd b = rng.symmetric_vec(ny);
    const double alpha = std::pow(10.0, -1.0 + 2.0 * rng.unit());
    const auto res = solve_subproblem(op, b, alpha);
    const Eigen::VectorXd w = rng.symmetric_vec(nx);
    const auto& X = op.domain_ip();
    const auto& Y = op.codomain_ip();
    const double lhs = X.norm_sq(w) - X.norm_sq(w - res.step);
    const double rhs = X.norm_sq(res.step) +
                       (Y.norm_sq(op.apply(res.step) - b) - Y.norm_sq(op.apply(w) - b)) / alpha +
                       Y.norm_sq(op.apply(w - res.step)) / alpha;
    const double scale = std::abs(lhs) + std::abs(rhs) + 1.0;
    CHECK(std::abs(lhs - rhs) / scale < 1e-8);
  }
}

TEST_CASE("multiplier upper and step lower bounds hold") {
  Rng rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng.unit() * 10);
    const Eigen::VectorXd a = random_diag(n, rng, 0.05, 2.0);
    const auto op = DenseOperator::diagonal(a);
    const Eigen::VectorXd b = rng.symmetric_vec(n);
    const double alpha = std::pow(10.0, -3.0 + 5.0 * rng.unit());
    const auto res = solve_subproblem(op, b, alpha);
    const double bnorm = b.norm();
    const double h_alpha = res.linres;
    // alpha <= |A* b|^2 / (|b| (|b| - H(alpha)))
    const double bound =
        op.domain_ip().norm_sq(op.apply_adjoint(b)) / (bnorm * (bnorm - h_alpha));
    CHECK(alpha <= bound + 1e-8);
    // |A h| >= |b| - H(alpha)
    CHECK(op.codomain_ip().norm(op.apply(res.step)) >= bnorm - h_alpha - 1e-10);
  }
}

TEST_CASE("interval search accepts the identity closed form") {
  const auto op = identity_op(3);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(3);
  b[1] = 1.0;
  const auto found = interval_search(op, b, 0.4, 0.6, 0.05, 0.5);
  REQUIRE(found.status == IntervalStatus::found);
  CHECK(found.sub.linres >= 0.4);
  CHECK(found.sub.linres <= 0.6);
  // H(alpha) = alpha/(1+alpha) = 0.5 at alpha = 1
  CHECK(found.sub.alpha == doctest::Approx(1.0).epsilon(0.5));
}

TEST_CASE("interval search lands inside a feasible bracket") {
  Rng rng(55);
  Eigen::Vector2d a(1.0, 0.1);
  const auto op = DenseOperator::diagonal(a);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd b = rng.symmetric_vec(2);
    if (b.norm() < 0.1) continue;
    const double c = 0.3 * b.norm(), d = 0.7 * b.norm();
    const auto found = interval_search(op, b, c, d, 1e-4, 0.5 * (c + d));
    REQUIRE(found.status == IntervalStatus::found);
    // recompute H from the returned step
    const double recomputed = (a.asDiagonal() * found.sub.step - b).norm();
    CHECK(recomputed >= c - 1e-12);
    CHECK(recomputed <= d + 1e-12);
    CHECK(found.sub.linres == doctest::Approx(recomputed).epsilon(1e-10));
  }
}

TEST_CASE("interval search rejects intervals at or above |b|") {
  const auto op = identity_op(3);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(interval_search(op, b, b.norm(), 2 * b.norm(), 1.0, 1.5 * b.norm()),
                  std::invalid_argument);
}

TEST_CASE("interval search reports an unreachable interval as infeasible") {
  // rank-deficient diagonal: inf_h |A h - b| = |b_2| stays above d
  Eigen::Vector2d a(1.0, 0.0);
  const auto op = DenseOperator::diagonal(a);
  Eigen::Vector2d b(0.1, 2.0);
  const auto res = interval_search(op, b, 0.5, 1.0, 1.0, 0.75);
  CHECK(res.status == IntervalStatus::infeasible);
}
