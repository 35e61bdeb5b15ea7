#pragma once

#include "rrlm/eit/mesh.hpp"
#include "rrlm/problems.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <memory>
#include <vector>

namespace rrlm::eit {

/// Values on mesh.boundary_nodes (ordered as in the mesh).
using BoundaryFn = Eigen::VectorXd;

constexpr double kDefaultGammaMin = 1e-3;
constexpr int kNumPatterns = 8;

/// Background 1 with conductivity 2 on triangles whose centroid lies inside
/// either disc of radius 0.15 centered at (0.35,0.35) or (0.65,0.65).
Eigen::VectorXd ground_truth(const TriMesh& mesh);

/// d = 8 currents: pattern 2m+k (k = 1,2; zero-based list index 2m+k-1) is
/// cos(2 k pi t) along face m in its arclength coordinate, zero elsewhere.
/// Corner nodes carry half the cosine value so each pattern has exact zero
/// boundary mean under the lumped mass while staying supported on one face.
std::vector<BoundaryFn> current_patterns(const TriMesh& mesh);

/// Lumped L2 inner product on a single boundary trace.
InnerProduct boundary_inner_product(const TriMesh& mesh);
/// Same weights repeated over d blocks.
InnerProduct data_inner_product(const TriMesh& mesh, int d);

/// Subtract the lumped boundary mean from each of the d blocks.
void project_zero_mean(const TriMesh& mesh, int d, Eigen::VectorXd& flat);

/// P1 stiffness system for one conductivity, with the zero-boundary-mean
/// constraint appended as a scalar multiplier row. One factorization serves
/// all right-hand sides.
class FemSystem {
 public:
  FemSystem(const TriMesh& mesh, const Eigen::VectorXd& gamma, double gamma_min = kDefaultGammaMin);

  // Potential for current g (nodal values on the boundary), lumped load.
  Eigen::VectorXd solve_current(const BoundaryFn& g) const;
  // Potential for a nodal load vector (must have zero total sum).
  Eigen::VectorXd solve_rhs(const Eigen::VectorXd& rhs_nodes) const;
  // Boundary values of u with the lumped mean removed.
  BoundaryFn trace(const Eigen::VectorXd& u) const;

  const TriMesh& mesh() const { return *mesh_; }
  const Eigen::VectorXd& boundary_weights() const { return bweights_; }

  FemSystem(const FemSystem&) = delete;
  FemSystem& operator=(const FemSystem&) = delete;

 private:
  const TriMesh* mesh_;
  Eigen::VectorXd bweights_;
  double btotal_ = 0.0;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

/// Boundary traces of the potentials for every pattern, stacked into one
/// flat vector of d blocks.
DataVector ntd_forward(const TriMesh& mesh, const Eigen::VectorXd& gamma,
                       const std::vector<BoundaryFn>& patterns,
                       double gamma_min = kDefaultGammaMin);

/// Linearization of the trace map at a fixed conductivity. apply solves the
/// sensitivity problem per pattern; apply_adjoint solves one auxiliary
/// problem per block and assembles -sum_j grad(u_j).grad(psi_j) per triangle,
/// divided by the weight so the identity holds in the weighted domain space
/// <u,v>_X = sum_i u_i v_i beta_i |T_i|.
class NtdJacobian final : public LinearOperator {
 public:
  NtdJacobian(std::shared_ptr<const TriMesh> mesh, const Eigen::VectorXd& gamma,
              const std::vector<BoundaryFn>& patterns, const Eigen::VectorXd& beta,
              double gamma_min = kDefaultGammaMin);

  DataVector apply(const ParamVector& h) const override;
  ParamVector apply_adjoint(const DataVector& z) const override;
  const InnerProduct& domain_ip() const override { return x_ip_; }
  const InnerProduct& codomain_ip() const override { return y_ip_; }

  // Traces of the cached potentials, i.e. the forward value at gamma.
  const DataVector& forward_traces() const { return traces_; }

 private:
  std::shared_ptr<const TriMesh> mesh_;
  FemSystem sys_;
  std::vector<Eigen::Matrix<double, 2, Eigen::Dynamic>> grad_basis_;  // per triangle, 2x3
  std::vector<Eigen::Matrix2Xd> grad_u_;                              // per pattern, 2xM
  Eigen::VectorXd beta_;
  InnerProduct x_ip_;
  InnerProduct y_ip_;
  DataLayout layout_;
  DataVector traces_;
};

/// beta_i = |F'(gamma0) chi_i|_Y / |T_i| per triangle; throws if any entry
/// degenerates.
Eigen::VectorXd compute_weight(const TriMesh& mesh, const Eigen::VectorXd& gamma0,
                               const std::vector<BoundaryFn>& patterns,
                               double gamma_min = kDefaultGammaMin);

struct SimulatedData {
  DataVector y;        // exact data projected onto the inversion mesh boundary
  DataVector y_delta;  // noisy data
  double delta_abs = 0.0;
};

/// Exact data from the ground truth on the fine mesh, restricted to the
/// coarse boundary nodes (meshes must be nested, fine at least twice as
/// fine), then corrupted with uniform noise of relative level delta_rel
/// projected into the zero-mean data space and normalized in the Y norm.
SimulatedData simulate_data(const TriMesh& fine, const TriMesh& coarse, double delta_rel,
                            std::uint64_t seed);

/// Full inverse-problem instance on a mesh: weighted parameter space from
/// the gamma0 = 1 sensitivity weight, initial guess 1, rasterized ground
/// truth as the known solution.
ProblemInstance make_problem(std::shared_ptr<const TriMesh> mesh,
                             double gamma_min = kDefaultGammaMin);

}  // namespace rrlm::eit
