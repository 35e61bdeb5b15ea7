#include "rrlm/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rrlm {

InnerProduct InnerProduct::euclidean(Eigen::Index dim) {
  if (dim < 0) throw std::invalid_argument("InnerProduct: negative dimension");
  InnerProduct ip;
  ip.dim_ = dim;
  return ip;
}

InnerProduct InnerProduct::weighted(Eigen::VectorXd weights) {
  if (weights.size() == 0) throw std::invalid_argument("InnerProduct: empty weight vector");
  if (!(weights.array() > 0.0).all())
    throw std::invalid_argument("InnerProduct: weights must be strictly positive");
  InnerProduct ip;
  ip.dim_ = weights.size();
  ip.weights_ = std::move(weights);
  return ip;
}

double InnerProduct::inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  if (u.size() != dim_ || v.size() != dim_)
    throw std::invalid_argument("InnerProduct: vector length mismatch");
  // grouping (u v) w keeps the form exactly symmetric in u and v
  if (is_weighted()) return ((u.array() * v.array()) * weights_.array()).sum();
  return u.dot(v);
}

double InnerProduct::norm(const Eigen::VectorXd& v) const {
  return std::sqrt(std::max(0.0, inner(v, v)));
}

Eigen::VectorXd InnerProduct::apply_weight(const Eigen::VectorXd& v) const {
  if (v.size() != dim_) throw std::invalid_argument("InnerProduct: vector length mismatch");
  if (!is_weighted()) return v;
  return (weights_.array() * v.array()).matrix();
}

DenseOperator::DenseOperator(Eigen::MatrixXd mat, InnerProduct domain, InnerProduct codomain)
    : mat_(std::move(mat)), domain_(std::move(domain)), codomain_(std::move(codomain)) {
  if (domain_.dim() != mat_.cols() || codomain_.dim() != mat_.rows())
    throw std::invalid_argument("DenseOperator: inner product dimensions do not match matrix");
}

DenseOperator DenseOperator::diagonal(const Eigen::VectorXd& diag) {
  const Eigen::Index n = diag.size();
  return DenseOperator(Eigen::MatrixXd(diag.asDiagonal()), InnerProduct::euclidean(n),
                       InnerProduct::euclidean(n));
}

DataVector DenseOperator::apply(const ParamVector& x) const {
  if (x.size() != mat_.cols()) throw std::invalid_argument("DenseOperator: bad input length");
  return mat_ * x;
}

ParamVector DenseOperator::apply_adjoint(const DataVector& z) const {
  if (z.size() != mat_.rows()) throw std::invalid_argument("DenseOperator: bad input length");
  Eigen::VectorXd s = mat_.transpose() * codomain_.apply_weight(z);
  if (domain_.is_weighted()) s.array() /= domain_.weights().array();
  return s;
}

CgResult cg_solve(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply_spd,
                  const Eigen::VectorXd& rhs, double tol, int maxit) {
  if (!(tol > 0)) throw std::invalid_argument("cg_solve: tol must be positive");
  const Eigen::Index n = rhs.size();
  if (maxit <= 0) maxit = static_cast<int>(10 * n);

  CgResult out;
  out.x = Eigen::VectorXd::Zero(n);
  const double bnorm = rhs.norm();
  if (!std::isfinite(bnorm)) throw std::runtime_error("cg_solve: non-finite right-hand side");
  if (bnorm == 0.0) {
    out.converged = true;
    return out;
  }

  Eigen::VectorXd r = rhs;
  Eigen::VectorXd p = r;
  double rho = r.squaredNorm();

  for (int it = 1; it <= maxit; ++it) {
    Eigen::VectorXd ap = apply_spd(p);
    const double pap = p.dot(ap);
    if (!std::isfinite(pap) || pap <= 0.0)
      throw std::runtime_error("cg_solve: operator is not positive definite (or non-finite)");
    const double alpha = rho / pap;
    out.x += alpha * p;
    r -= alpha * ap;
    const double rho_new = r.squaredNorm();
    if (!std::isfinite(rho_new)) throw std::runtime_error("cg_solve: non-finite residual");
    out.iterations = it;
    out.rel_residual = std::sqrt(rho_new) / bnorm;
    if (out.rel_residual <= tol) {
      out.converged = true;
      return out;
    }
    p = r + (rho_new / rho) * p;
    rho = rho_new;
  }
  return out;  // converged == false: budget exhausted
}

double adjoint_mismatch(const LinearOperator& op, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("adjoint_mismatch: trials must be >= 1");
  const InnerProduct& X = op.domain_ip();
  const InnerProduct& Y = op.codomain_ip();
  Rng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Eigen::VectorXd h = rng.symmetric_vec(X.dim());
    const Eigen::VectorXd z = rng.symmetric_vec(Y.dim());
    const Eigen::VectorXd ah = op.apply(h);
    const Eigen::VectorXd az = op.apply_adjoint(z);
    const double lhs = Y.inner(ah, z);
    const double rhs = X.inner(h, az);
    const double denom = Y.norm(ah) * Y.norm(z) + std::numeric_limits<double>::min();
    worst = std::max(worst, std::abs(lhs - rhs) / denom);
  }
  return worst;
}

Eigen::VectorXd Rng::symmetric_vec(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = symmetric();
  return v;
}

}  // namespace rrlm
