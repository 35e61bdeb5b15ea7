#include "rrlm/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace rrlm {

namespace {

Eigen::VectorXd power_diagonal(int n, double s) {
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d[i] = std::pow(static_cast<double>(i + 1), -s);
  return d;
}

}  // namespace

ProblemInstance linear_diagonal(int n, double s) {
  if (n < 2) throw std::invalid_argument("linear_diagonal: n must be >= 2");
  if (!(s > 0)) throw std::invalid_argument("linear_diagonal: s must be positive");

  const Eigen::VectorXd diag = power_diagonal(n, s);
  auto op = std::make_shared<const DenseOperator>(DenseOperator::diagonal(diag));

  ProblemInstance p;
  p.dim_x = n;
  p.y_layout = DataLayout{1, n};
  p.x_ip = InnerProduct::euclidean(n);
  p.y_ip = InnerProduct::euclidean(n);
  p.forward = [diag](const ParamVector& x) -> DataVector {
    return (diag.array() * x.array()).matrix();
  };
  p.jacobian_at = [op](const ParamVector&) { return op; };  // constant Jacobian
  p.domain_check = [](const ParamVector&) { return true; };
  Eigen::VectorXd sol(n);
  for (int i = 0; i < n; ++i) sol[i] = std::sin(static_cast<double>(i + 1));
  p.known_solution = sol;
  p.initial_guess = Eigen::VectorXd::Zero(n);
  p.eta_hint = 0.0;
  return p;
}

ProblemInstance nonlinear_exp(int n, double s) {
  if (n < 2) throw std::invalid_argument("nonlinear_exp: n must be >= 2");

  const Eigen::VectorXd diag = power_diagonal(n, s);

  ProblemInstance p;
  p.dim_x = n;
  p.y_layout = DataLayout{1, n};
  p.x_ip = InnerProduct::euclidean(n);
  p.y_ip = InnerProduct::euclidean(n);
  p.forward = [diag](const ParamVector& x) -> DataVector {
    return (diag.array() * x.array().exp()).matrix();
  };
  p.jacobian_at = [diag](const ParamVector& x) -> std::shared_ptr<const LinearOperator> {
    const Eigen::VectorXd scale = (diag.array() * x.array().exp()).matrix();
    return std::make_shared<const DenseOperator>(DenseOperator::diagonal(scale));
  };
  p.domain_check = [](const ParamVector& x) { return (x.array().abs() <= 50.0).all(); };
  p.known_solution = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd x0(n);
  for (int i = 0; i < n; ++i) x0[i] = 0.25 + 0.1 * std::sin(static_cast<double>(i + 1));
  p.initial_guess = x0;
  p.eta_hint = 0.4;  // assumed, checked empirically via empirical_eta
  return p;
}

double empirical_eta(const ProblemInstance& p, double radius, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("empirical_eta: samples must be >= 1");
  const ParamVector center =
      p.known_solution ? *p.known_solution : p.initial_guess;
  Rng rng(seed);
  auto draw = [&]() -> ParamVector {
    Eigen::VectorXd dir = rng.symmetric_vec(p.dim_x);
    const double dn = p.x_ip.norm(dir);
    if (dn == 0.0) return center;
    return center + (radius * rng.unit() / dn) * dir;
  };
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const ParamVector x = draw();
    const ParamVector xb = draw();
    if (!p.domain_check(x) || !p.domain_check(xb)) continue;
    const DataVector fx = p.forward(x);
    const DataVector fxb = p.forward(xb);
    const auto jac = p.jacobian_at(x);
    const double num = p.y_ip.norm(fxb - fx - jac->apply(xb - x));
    const double den = p.y_ip.norm(fxb - fx);
    if (den > 1e-12) worst = std::max(worst, num / den);
  }
  return worst;
}

NoisyData add_relative_noise(const DataVector& y, double delta_rel, const InnerProduct& y_ip,
                             std::uint64_t seed) {
  if (delta_rel < 0) throw std::invalid_argument("add_relative_noise: delta must be >= 0");
  NoisyData out;
  if (delta_rel == 0.0) {
    out.y_delta = y;
    out.delta_abs = 0.0;
    return out;
  }
  Rng rng(seed);
  Eigen::VectorXd noi = rng.symmetric_vec(y.size());
  const double nn = y_ip.norm(noi);
  if (nn == 0.0) throw std::runtime_error("add_relative_noise: degenerate noise draw");
  noi /= nn;
  const double ynorm = y_ip.norm(y);
  out.delta_abs = delta_rel * ynorm;
  out.y_delta = y + out.delta_abs * noi;
  return out;
}

}  // namespace rrlm
