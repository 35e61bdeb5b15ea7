#include "rrlm/eit/mesh.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rrlm::eit {

Eigen::Vector2d TriMesh::centroid(int t) const {
  const auto& tri = triangles[t];
  return (nodes[tri[0]] + nodes[tri[1]] + nodes[tri[2]]) / 3.0;
}

void TriMesh::finalize() {
  const int m = num_triangles();
  areas.resize(m);
  for (int t = 0; t < m; ++t) {
    const auto& tri = triangles[t];
    const Eigen::Vector2d e1 = nodes[tri[1]] - nodes[tri[0]];
    const Eigen::Vector2d e2 = nodes[tri[2]] - nodes[tri[0]];
    const double a = 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
    if (!(a > 0.0)) throw std::invalid_argument("TriMesh: triangle with nonpositive area");
    areas[t] = a;
  }
  std::set<int> bset;
  for (const auto& e : boundary_edges) {
    bset.insert(e.a);
    bset.insert(e.b);
  }
  boundary_nodes.assign(bset.begin(), bset.end());
  boundary_index.assign(nodes.size(), -1);
  for (int i = 0; i < num_boundary(); ++i) boundary_index[boundary_nodes[i]] = i;
}

TriMesh structured_mesh(int n) {
  if (n < 4) throw std::invalid_argument("structured_mesh: n must be >= 4");
  TriMesh mesh;
  mesh.refinement = n;
  const int nn = n + 1;
  mesh.nodes.reserve(static_cast<std::size_t>(nn) * nn);
  for (int j = 0; j < nn; ++j)
    for (int i = 0; i < nn; ++i)
      mesh.nodes.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
  auto id = [nn](int i, int j) { return j * nn + i; };

  mesh.triangles.reserve(static_cast<std::size_t>(2) * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int bl = id(i, j), br = id(i + 1, j), tr = id(i + 1, j + 1), tl = id(i, j + 1);
      mesh.triangles.push_back({bl, br, tr});
      mesh.triangles.push_back({bl, tr, tl});
    }
  }

  for (int i = 0; i < n; ++i) mesh.boundary_edges.push_back({id(i, 0), id(i + 1, 0), 0});
  for (int j = 0; j < n; ++j) mesh.boundary_edges.push_back({id(n, j), id(n, j + 1), 1});
  for (int i = 0; i < n; ++i) mesh.boundary_edges.push_back({id(i, n), id(i + 1, n), 2});
  for (int j = 0; j < n; ++j) mesh.boundary_edges.push_back({id(0, j), id(0, j + 1), 3});

  mesh.finalize();
  return mesh;
}

Eigen::VectorXd boundary_lumped_weights(const TriMesh& mesh) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(mesh.num_boundary());
  for (const auto& e : mesh.boundary_edges) {
    const double len = (mesh.nodes[e.a] - mesh.nodes[e.b]).norm();
    w[mesh.boundary_index[e.a]] += 0.5 * len;
    w[mesh.boundary_index[e.b]] += 0.5 * len;
  }
  return w;
}

void write_mesh(const TriMesh& mesh, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_mesh: cannot open " + path);
  char buf[64];
  f << "NODES " << mesh.num_nodes() << "\n";
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g", mesh.nodes[i].x(), mesh.nodes[i].y());
    f << i << " " << buf << "\n";
  }
  f << "TRIANGLES " << mesh.num_triangles() << "\n";
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    f << t << " " << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
  }
  f << "BOUNDARY " << mesh.boundary_edges.size() << "\n";
  for (const auto& e : mesh.boundary_edges) f << e.a << " " << e.b << " " << e.face << "\n";
  if (!f) throw std::runtime_error("write_mesh: write failed for " + path);
}

TriMesh read_mesh(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_mesh: cannot open " + path);
  TriMesh mesh;
  std::string tag;
  std::size_t count = 0;

  if (!(f >> tag >> count) || tag != "NODES") throw std::runtime_error("read_mesh: expected NODES");
  mesh.nodes.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t idx;
    double x, y;
    if (!(f >> idx >> x >> y) || idx != i) throw std::runtime_error("read_mesh: bad node row");
    mesh.nodes[i] = Eigen::Vector2d(x, y);
  }

  if (!(f >> tag >> count) || tag != "TRIANGLES")
    throw std::runtime_error("read_mesh: expected TRIANGLES");
  mesh.triangles.resize(count);
  for (std::size_t t = 0; t < count; ++t) {
    std::size_t idx;
    int a, b, c;
    if (!(f >> idx >> a >> b >> c) || idx != t) throw std::runtime_error("read_mesh: bad triangle row");
    mesh.triangles[t] = {a, b, c};
  }

  if (!(f >> tag >> count) || tag != "BOUNDARY")
    throw std::runtime_error("read_mesh: expected BOUNDARY");
  mesh.boundary_edges.resize(count);
  for (std::size_t e = 0; e < count; ++e) {
    BoundaryEdge be;
    if (!(f >> be.a >> be.b >> be.face)) throw std::runtime_error("read_mesh: bad boundary row");
    mesh.boundary_edges[e] = be;
  }

  // structured meshes of the unit square have 4 n boundary edges
  mesh.refinement = static_cast<int>(mesh.boundary_edges.size() / 4);
  mesh.finalize();
  return mesh;
}

}  // namespace rrlm::eit
