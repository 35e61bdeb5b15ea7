#pragma once

#include <Eigen/Core>

#include <array>
#include <string>
#include <vector>

namespace rrlm::eit {

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  int face = 0;  // 0 bottom, 1 right, 2 top, 3 left
};

/// Triangulation of the unit square with labeled boundary edges.
struct TriMesh {
  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::vector<BoundaryEdge> boundary_edges;
  Eigen::VectorXd areas;
  int refinement = 0;  // cells per side for structured meshes

  std::vector<int> boundary_nodes;       // ascending node ids
  std::vector<int> boundary_index;       // node id -> position in boundary_nodes, -1 inside

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_boundary() const { return static_cast<int>(boundary_nodes.size()); }
  Eigen::Vector2d centroid(int t) const;

  // Computes areas (validating orientation) and the boundary node tables.
  void finalize();
};

/// Uniform n x n grid of squares, each split into two triangles along the
/// bottom-left/top-right diagonal; M = 2 n^2 triangles of area 1/(2 n^2).
TriMesh structured_mesh(int n);

/// Lumped boundary mass: per boundary node, half the total length of its
/// incident boundary edges.
Eigen::VectorXd boundary_lumped_weights(const TriMesh& mesh);

/// Plain-text format with NODES / TRIANGLES / BOUNDARY sections; coordinates
/// carry 17 significant digits so write -> read -> write is byte-identical.
void write_mesh(const TriMesh& mesh, const std::string& path);
TriMesh read_mesh(const std::string& path);

}  // namespace rrlm::eit
