#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <random>

namespace rrlm {

using ParamVector = Eigen::VectorXd;
using DataVector = Eigen::VectorXd;

// d trace blocks of equal length stored contiguously in one flat vector.
struct DataLayout {
  int blocks = 1;
  Eigen::Index block_len = 0;

  Eigen::Index flat_dim() const { return blocks * block_len; }
};

inline auto data_block(DataVector& v, const DataLayout& lay, int j) {
  return v.segment(j * lay.block_len, lay.block_len);
}
inline auto data_block(const DataVector& v, const DataLayout& lay, int j) {
  return v.segment(j * lay.block_len, lay.block_len);
}

/// Inner product on coefficient vectors: plain euclidean or with strictly
/// positive diagonal weights.
class InnerProduct {
 public:
  InnerProduct() = default;

  static InnerProduct euclidean(Eigen::Index dim);
  static InnerProduct weighted(Eigen::VectorXd weights);

  double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  double norm_sq(const Eigen::VectorXd& v) const { return inner(v, v); }
  double norm(const Eigen::VectorXd& v) const;

  Eigen::Index dim() const { return dim_; }
  bool is_weighted() const { return weights_.size() > 0; }
  const Eigen::VectorXd& weights() const { return weights_; }

  // W v (identity when euclidean)
  Eigen::VectorXd apply_weight(const Eigen::VectorXd& v) const;

 private:
  Eigen::Index dim_ = 0;
  Eigen::VectorXd weights_;  // empty for euclidean
};

/// Linear map between two weighted coefficient spaces. apply_adjoint must be
/// the adjoint with respect to the declared inner products:
///   <apply(h), z>_Y == <h, apply_adjoint(z)>_X  for all h, z.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual DataVector apply(const ParamVector& x) const = 0;
  virtual ParamVector apply_adjoint(const DataVector& z) const = 0;
  virtual const InnerProduct& domain_ip() const = 0;
  virtual const InnerProduct& codomain_ip() const = 0;
};

/// Dense matrix operator; the adjoint is derived from the declared inner
/// products, A* = Wx^{-1} A^T Wy.
class DenseOperator final : public LinearOperator {
 public:
  DenseOperator(Eigen::MatrixXd mat, InnerProduct domain, InnerProduct codomain);

  // Diagonal matrix on euclidean spaces.
  static DenseOperator diagonal(const Eigen::VectorXd& diag);

  DataVector apply(const ParamVector& x) const override;
  ParamVector apply_adjoint(const DataVector& z) const override;
  const InnerProduct& domain_ip() const override { return domain_; }
  const InnerProduct& codomain_ip() const override { return codomain_; }

  const Eigen::MatrixXd& matrix() const { return mat_; }

 private:
  Eigen::MatrixXd mat_;
  InnerProduct domain_;
  InnerProduct codomain_;
};

struct CgResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;  // false when the iteration budget ran out
};

/// Plain conjugate gradients for an SPD map given as a callback (SPD with
/// respect to the euclidean inner product). maxit <= 0 selects 10 * n.
/// Throws std::runtime_error when non-finite values appear or the operator
/// is found indefinite; hitting maxit is reported via converged == false.
CgResult cg_solve(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply_spd,
                  const Eigen::VectorXd& rhs, double tol = 1e-10, int maxit = -1);

/// Largest relative defect of the adjoint identity over seeded random probes:
/// max |<Ah,z>_Y - <h,A*z>_X| / (|Ah|_Y |z|_Y + tiny).
double adjoint_mismatch(const LinearOperator& op, int trials, std::uint64_t seed);

/// Deterministic uniform generator (identical stream on every platform).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }  // [0,1)
  double symmetric() { return 2.0 * unit() - 1.0; }                        // [-1,1)
  Eigen::VectorXd symmetric_vec(Eigen::Index n);

 private:
  std::mt19937_64 eng_;
};

}  // namespace rrlm
