#include "rrlm/eit/forward.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rrlm::eit {

namespace {

constexpr double kOnFaceTol = 1e-12;

// Faces of (0,1)^2 and the arclength coordinate along each.
bool on_face(const Eigen::Vector2d& p, int face) {
  switch (face) {
    case 0: return std::abs(p.y()) <= kOnFaceTol;
    case 1: return std::abs(p.x() - 1.0) <= kOnFaceTol;
    case 2: return std::abs(p.y() - 1.0) <= kOnFaceTol;
    case 3: return std::abs(p.x()) <= kOnFaceTol;
  }
  return false;
}

double face_coord(const Eigen::Vector2d& p, int face) {
  return (face == 0 || face == 2) ? p.x() : p.y();
}

int faces_touching(const Eigen::Vector2d& p) {
  int n = 0;
  for (int m = 0; m < 4; ++m) n += on_face(p, m) ? 1 : 0;
  return n;
}

std::vector<Eigen::Matrix<double, 2, Eigen::Dynamic>> basis_gradients(const TriMesh& mesh) {
  std::vector<Eigen::Matrix<double, 2, Eigen::Dynamic>> g(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    Eigen::Matrix2d jac;
    jac.col(0) = mesh.nodes[tri[1]] - mesh.nodes[tri[0]];
    jac.col(1) = mesh.nodes[tri[2]] - mesh.nodes[tri[0]];
    const Eigen::Matrix2d jit = jac.inverse().transpose();
    Eigen::Matrix<double, 2, Eigen::Dynamic> gt(2, 3);
    gt.col(1) = jit.col(0);
    gt.col(2) = jit.col(1);
    gt.col(0) = -gt.col(1) - gt.col(2);
    g[t] = gt;
  }
  return g;
}

void check_gamma(const TriMesh& mesh, const Eigen::VectorXd& gamma, double gamma_min) {
  if (gamma.size() != mesh.num_triangles())
    throw std::invalid_argument("eit: conductivity length does not match the mesh");
  if (!(gamma.array() >= gamma_min).all())
    throw std::invalid_argument("eit: conductivity below the admissible minimum");
}

}  // namespace

Eigen::VectorXd ground_truth(const TriMesh& mesh) {
  const Eigen::Vector2d c1(0.35, 0.35), c2(0.65, 0.65);
  const double radius = 0.15;
  Eigen::VectorXd gamma = Eigen::VectorXd::Ones(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Eigen::Vector2d c = mesh.centroid(t);
    if ((c - c1).norm() <= radius || (c - c2).norm() <= radius) gamma[t] = 2.0;
  }
  return gamma;
}

std::vector<BoundaryFn> current_patterns(const TriMesh& mesh) {
  std::vector<BoundaryFn> patterns(kNumPatterns,
                                   Eigen::VectorXd::Zero(mesh.num_boundary()));
  for (int bi = 0; bi < mesh.num_boundary(); ++bi) {
    const Eigen::Vector2d p = mesh.nodes[mesh.boundary_nodes[bi]];
    const bool corner = faces_touching(p) > 1;
    for (int m = 0; m < 4; ++m) {
      if (!on_face(p, m)) continue;
      const double t = face_coord(p, m);
      for (int k = 1; k <= 2; ++k) {
        double val = std::cos(2.0 * k * std::numbers::pi * t);
        if (corner) val *= 0.5;
        patterns[2 * m + (k - 1)][bi] = val;
      }
    }
  }
  return patterns;
}

InnerProduct boundary_inner_product(const TriMesh& mesh) {
  return InnerProduct::weighted(boundary_lumped_weights(mesh));
}

InnerProduct data_inner_product(const TriMesh& mesh, int d) {
  const Eigen::VectorXd w = boundary_lumped_weights(mesh);
  Eigen::VectorXd rep(d * w.size());
  for (int j = 0; j < d; ++j) rep.segment(j * w.size(), w.size()) = w;
  return InnerProduct::weighted(rep);
}

void project_zero_mean(const TriMesh& mesh, int d, Eigen::VectorXd& flat) {
  const Eigen::VectorXd w = boundary_lumped_weights(mesh);
  const double total = w.sum();
  const Eigen::Index len = w.size();
  if (flat.size() != d * len) throw std::invalid_argument("project_zero_mean: bad vector length");
  for (int j = 0; j < d; ++j) {
    auto blk = flat.segment(j * len, len);
    blk.array() -= w.dot(blk.matrix()) / total;
  }
}

FemSystem::FemSystem(const TriMesh& mesh, const Eigen::VectorXd& gamma, double gamma_min)
    : mesh_(&mesh) {
  check_gamma(mesh, gamma, gamma_min);
  bweights_ = boundary_lumped_weights(mesh);
  btotal_ = bweights_.sum();

  const int n = mesh.num_nodes();
  const auto grads = basis_gradients(mesh);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(9) * mesh.num_triangles() + 2 * mesh.num_boundary());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double coef = gamma[t] * mesh.areas[t];
    for (int l = 0; l < 3; ++l)
      for (int m = 0; m < 3; ++m)
        trip.emplace_back(tri[l], tri[m], coef * grads[t].col(l).dot(grads[t].col(m)));
  }
  // constraint row/column: lumped boundary mean of u equals zero
  for (int bi = 0; bi < mesh.num_boundary(); ++bi) {
    trip.emplace_back(mesh.boundary_nodes[bi], n, bweights_[bi]);
    trip.emplace_back(n, mesh.boundary_nodes[bi], bweights_[bi]);
  }
  Eigen::SparseMatrix<double> sys(n + 1, n + 1);
  sys.setFromTriplets(trip.begin(), trip.end());
  lu_.compute(sys);
  if (lu_.info() != Eigen::Success)
    throw std::runtime_error("FemSystem: factorization of the constrained system failed");
}

Eigen::VectorXd FemSystem::solve_current(const BoundaryFn& g) const {
  if (g.size() != mesh_->num_boundary())
    throw std::invalid_argument("FemSystem: current vector length mismatch");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(mesh_->num_nodes() + 1);
  for (int bi = 0; bi < mesh_->num_boundary(); ++bi)
    rhs[mesh_->boundary_nodes[bi]] = bweights_[bi] * g[bi];
  const Eigen::VectorXd sol = lu_.solve(rhs);
  return sol.head(mesh_->num_nodes());
}

Eigen::VectorXd FemSystem::solve_rhs(const Eigen::VectorXd& rhs_nodes) const {
  if (rhs_nodes.size() != mesh_->num_nodes())
    throw std::invalid_argument("FemSystem: load vector length mismatch");
  Eigen::VectorXd rhs(mesh_->num_nodes() + 1);
  rhs.head(mesh_->num_nodes()) = rhs_nodes;
  rhs[mesh_->num_nodes()] = 0.0;
  const Eigen::VectorXd sol = lu_.solve(rhs);
  return sol.head(mesh_->num_nodes());
}

BoundaryFn FemSystem::trace(const Eigen::VectorXd& u) const {
  BoundaryFn f(mesh_->num_boundary());
  for (int bi = 0; bi < mesh_->num_boundary(); ++bi) f[bi] = u[mesh_->boundary_nodes[bi]];
  f.array() -= bweights_.dot(f.matrix()) / btotal_;
  return f;
}

DataVector ntd_forward(const TriMesh& mesh, const Eigen::VectorXd& gamma,
                       const std::vector<BoundaryFn>& patterns, double gamma_min) {
  const FemSystem sys(mesh, gamma, gamma_min);
  const int d = static_cast<int>(patterns.size());
  DataVector out(d * mesh.num_boundary());
  for (int j = 0; j < d; ++j)
    out.segment(j * mesh.num_boundary(), mesh.num_boundary()) =
        sys.trace(sys.solve_current(patterns[j]));
  return out;
}

NtdJacobian::NtdJacobian(std::shared_ptr<const TriMesh> mesh, const Eigen::VectorXd& gamma,
                         const std::vector<BoundaryFn>& patterns, const Eigen::VectorXd& beta,
                         double gamma_min)
    : mesh_(std::move(mesh)), sys_(*mesh_, gamma, gamma_min), beta_(beta) {
  if (beta_.size() != mesh_->num_triangles())
    throw std::invalid_argument("NtdJacobian: weight length does not match the mesh");
  if (!(beta_.array() > 0.0).all())
    throw std::invalid_argument("NtdJacobian: weights must be strictly positive");

  grad_basis_ = basis_gradients(*mesh_);
  const int d = static_cast<int>(patterns.size());
  const int bn = mesh_->num_boundary();
  layout_ = DataLayout{d, bn};
  traces_.resize(layout_.flat_dim());
  grad_u_.resize(d);
  for (int j = 0; j < d; ++j) {
    const Eigen::VectorXd u = sys_.solve_current(patterns[j]);
    traces_.segment(j * bn, bn) = sys_.trace(u);
    Eigen::Matrix2Xd gu(2, mesh_->num_triangles());
    for (int t = 0; t < mesh_->num_triangles(); ++t) {
      const auto& tri = mesh_->triangles[t];
      gu.col(t) = u[tri[0]] * grad_basis_[t].col(0) + u[tri[1]] * grad_basis_[t].col(1) +
                  u[tri[2]] * grad_basis_[t].col(2);
    }
    grad_u_[j] = std::move(gu);
  }
  x_ip_ = InnerProduct::weighted((beta_.array() * mesh_->areas.array()).matrix());
  y_ip_ = data_inner_product(*mesh_, d);
}

DataVector NtdJacobian::apply(const ParamVector& h) const {
  if (h.size() != mesh_->num_triangles())
    throw std::invalid_argument("NtdJacobian: parameter length mismatch");
  const int bn = mesh_->num_boundary();
  DataVector out(layout_.flat_dim());
  Eigen::VectorXd rhs(mesh_->num_nodes());
  for (int j = 0; j < layout_.blocks; ++j) {
    rhs.setZero();
    for (int t = 0; t < mesh_->num_triangles(); ++t) {
      const double coef = h[t] * mesh_->areas[t];
      if (coef == 0.0) continue;
      const auto& tri = mesh_->triangles[t];
      for (int l = 0; l < 3; ++l)
        rhs[tri[l]] -= coef * grad_u_[j].col(t).dot(grad_basis_[t].col(l));
    }
    out.segment(j * bn, bn) = sys_.trace(sys_.solve_rhs(rhs));
  }
  return out;
}

ParamVector NtdJacobian::apply_adjoint(const DataVector& z) const {
  if (z.size() != layout_.flat_dim())
    throw std::invalid_argument("NtdJacobian: data length mismatch");
  const int bn = mesh_->num_boundary();
  const Eigen::VectorXd& w = sys_.boundary_weights();
  ParamVector acc = ParamVector::Zero(mesh_->num_triangles());
  for (int j = 0; j < layout_.blocks; ++j) {
    BoundaryFn zj = z.segment(j * bn, bn);
    zj.array() -= w.dot(zj.matrix()) / w.sum();  // restrict to the zero-mean trace space
    const Eigen::VectorXd psi = sys_.solve_current(zj);
    for (int t = 0; t < mesh_->num_triangles(); ++t) {
      const auto& tri = mesh_->triangles[t];
      const Eigen::Vector2d gpsi = psi[tri[0]] * grad_basis_[t].col(0) +
                                   psi[tri[1]] * grad_basis_[t].col(1) +
                                   psi[tri[2]] * grad_basis_[t].col(2);
      acc[t] -= grad_u_[j].col(t).dot(gpsi);
    }
  }
  acc.array() /= beta_.array();
  return acc;
}

Eigen::VectorXd compute_weight(const TriMesh& mesh, const Eigen::VectorXd& gamma0,
                               const std::vector<BoundaryFn>& patterns, double gamma_min) {
  auto alias = std::shared_ptr<const TriMesh>(&mesh, [](const TriMesh*) {});
  const NtdJacobian jac(alias, gamma0, patterns,
                        Eigen::VectorXd::Ones(mesh.num_triangles()), gamma_min);
  const InnerProduct y_ip = data_inner_product(mesh, static_cast<int>(patterns.size()));
  Eigen::VectorXd beta(mesh.num_triangles());
  ParamVector e = ParamVector::Zero(mesh.num_triangles());
  for (int i = 0; i < mesh.num_triangles(); ++i) {
    e[i] = 1.0;
    beta[i] = y_ip.norm(jac.apply(e)) / mesh.areas[i];
    e[i] = 0.0;
    if (!(beta[i] > 0.0) || !std::isfinite(beta[i]))
      throw std::runtime_error("compute_weight: degenerate weight entry");
  }
  return beta;
}

SimulatedData simulate_data(const TriMesh& fine, const TriMesh& coarse, double delta_rel,
                            std::uint64_t seed) {
  if (fine.refinement < 2 * coarse.refinement)
    throw std::invalid_argument(
        "simulate_data: the data mesh must be at least twice as fine as the inversion mesh");
  if (delta_rel < 0) throw std::invalid_argument("simulate_data: delta must be >= 0");

  const DataVector y_fine = ntd_forward(fine, ground_truth(fine), current_patterns(fine));

  // restrict to coarse boundary nodes (nested meshes share their positions)
  const int bf = fine.num_boundary();
  const int bc = coarse.num_boundary();
  std::vector<int> where(bc, -1);
  for (int i = 0; i < bc; ++i) {
    const Eigen::Vector2d p = coarse.nodes[coarse.boundary_nodes[i]];
    for (int k = 0; k < bf; ++k) {
      if ((fine.nodes[fine.boundary_nodes[k]] - p).lpNorm<Eigen::Infinity>() <= 1e-12) {
        where[i] = k;
        break;
      }
    }
    if (where[i] < 0) throw std::runtime_error("simulate_data: meshes are not nested");
  }

  SimulatedData out;
  out.y.resize(kNumPatterns * bc);
  for (int j = 0; j < kNumPatterns; ++j)
    for (int i = 0; i < bc; ++i) out.y[j * bc + i] = y_fine[j * bf + where[i]];
  project_zero_mean(coarse, kNumPatterns, out.y);

  if (delta_rel == 0.0) {
    out.y_delta = out.y;
    out.delta_abs = 0.0;
    return out;
  }
  const InnerProduct y_ip = data_inner_product(coarse, kNumPatterns);
  Rng rng(seed);
  Eigen::VectorXd noi = rng.symmetric_vec(out.y.size());
  project_zero_mean(coarse, kNumPatterns, noi);
  const double nn = y_ip.norm(noi);
  if (nn == 0.0) throw std::runtime_error("simulate_data: degenerate noise draw");
  noi /= nn;
  out.delta_abs = delta_rel * y_ip.norm(out.y);
  out.y_delta = out.y + out.delta_abs * noi;
  return out;
}

ProblemInstance make_problem(std::shared_ptr<const TriMesh> mesh, double gamma_min) {
  const auto patterns = current_patterns(*mesh);
  const Eigen::VectorXd gamma0 = Eigen::VectorXd::Ones(mesh->num_triangles());
  const Eigen::VectorXd beta = compute_weight(*mesh, gamma0, patterns, gamma_min);

  ProblemInstance p;
  p.dim_x = mesh->num_triangles();
  p.y_layout = DataLayout{kNumPatterns, mesh->num_boundary()};
  p.x_ip = InnerProduct::weighted((beta.array() * mesh->areas.array()).matrix());
  p.y_ip = data_inner_product(*mesh, kNumPatterns);
  p.forward = [mesh, patterns, gamma_min](const ParamVector& gamma) {
    return ntd_forward(*mesh, gamma, patterns, gamma_min);
  };
  p.jacobian_at = [mesh, patterns, beta,
                   gamma_min](const ParamVector& gamma) -> std::shared_ptr<const LinearOperator> {
    return std::make_shared<const NtdJacobian>(mesh, gamma, patterns, beta, gamma_min);
  };
  p.domain_check = [gamma_min](const ParamVector& gamma) {
    return (gamma.array() >= gamma_min).all();
  };
  p.known_solution = ground_truth(*mesh);
  p.initial_guess = gamma0;
  p.eta_hint = 0.4;
  return p;
}

}  // namespace rrlm::eit
