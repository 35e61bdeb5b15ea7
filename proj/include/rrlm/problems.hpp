#pragma once

#include "rrlm/linalg.hpp"

#include <functional>
#include <memory>
#include <optional>

namespace rrlm {

/// A forward model together with its linearization, domain test and metadata.
/// Instances are immutable after construction and safe to share across runs.
struct ProblemInstance {
  Eigen::Index dim_x = 0;
  DataLayout y_layout;
  InnerProduct x_ip;
  InnerProduct y_ip;
  std::function<DataVector(const ParamVector&)> forward;
  std::function<std::shared_ptr<const LinearOperator>(const ParamVector&)> jacobian_at;
  std::function<bool(const ParamVector&)> domain_check;  // true = inside the domain
  std::optional<ParamVector> known_solution;
  ParamVector initial_guess;
  double eta_hint = 0.0;
};

/// F(x) = D x with D = diag(i^{-s}), i = 1..n. Linear, so the nonlinearity
/// constant is 0. Known solution fixed at x*_i = sin(i+1); start at 0.
ProblemInstance linear_diagonal(int n, double s);

/// F(x) = D exp(x) componentwise with D = diag(i^{-s}); closed-form Jacobian
/// and adjoint. Known solution x* = 0 (y = D 1); components are rejected by
/// the domain test once |x_i| > 50.
ProblemInstance nonlinear_exp(int n, double s);

/// Measured surrogate for the tangential-cone constant:
/// max over sample pairs in a ball around the known solution of
/// |F(xb) - F(x) - F'(x)(xb - x)| / |F(xb) - F(x)|.
double empirical_eta(const ProblemInstance& p, double radius, int samples, std::uint64_t seed);

struct NoisyData {
  DataVector y_delta;
  double delta_abs = 0.0;  // |y_delta - y|_Y
};

/// y_delta = y + delta_rel * |y|_Y * noi with noi uniform in [-1,1] per
/// component, normalized to |noi|_Y = 1.
NoisyData add_relative_noise(const DataVector& y, double delta_rel, const InnerProduct& y_ip,
                             std::uint64_t seed);

}  // namespace rrlm
