// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
//
// Piecewise-linear finite elements with homogeneous Dirichlet conditions
// on the base domain:
//
//   interval (0,1):   n uniform cells, interior nodes x_i = i/n,
//                     stiffness stencil (-1, 2, -1)/h,
//                     mass stencil h (1/6, 2/3, 1/6);
//   square (-1,1)^2:  n x n uniform cells, each split into two triangles
//                     along the same diagonal (lower-left to upper-right),
//                     interior nodes numbered lexicographically,
//                     id(i,j) = (j-1)(n-1) + (i-1)  for  i,j = 1..n-1.
//
// The 2-d element matrices are computed from vertex coordinates (not
// hard-coded stencils), so the assembly stays correct if the splitting
// convention changes.  h_T denotes the largest element diameter:
// h on the interval, sqrt(2) * (2/n) on the square.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "fracwave/spectral_basis.hpp"

namespace fracwave {

struct OmegaTriangle {
  int v[3];  // structured-grid node ids (including boundary nodes)
};

class OmegaMesh {
 public:
  // n cells per direction, n >= 2 (so at least one interior node).
  OmegaMesh(Domain domain, int n);

  Domain domain() const { return domain_; }
  int cells_per_direction() const { return n_; }
  double cell_width() const { return cell_h_; }
  // Largest element diameter: cell_width on the interval,
  // sqrt(2)*cell_width on the square.
  double mesh_size() const { return h_t_; }
  int num_interior() const { return num_interior_; }

  // --- structured-node bookkeeping (square: (n+1)^2 nodes, interval:
  // n+1 nodes), used by assembly and evaluation ---
  int num_nodes() const;
  // interval: grid index i in [0, n]; square: (i, j) each in [0, n].
  int node_id(int i, int j = 0) const;
  // interior unknown index of a node id, or -1 on the boundary.
  int interior_index_of_node(int node) const { return interior_of_node_[node]; }
  // coordinates of a node id (x2 = 0 on the interval)
  void node_coord(int node, double& x1, double& x2) const;

  const std::vector<OmegaTriangle>& triangles() const { return triangles_; }

 private:
  Domain domain_;
  int n_ = 0;
  double cell_h_ = 0.0;
  double h_t_ = 0.0;
  int num_interior_ = 0;
  std::vector<int> interior_of_node_;
  std::vector<OmegaTriangle> triangles_;  // empty on the interval
};

struct OmegaMatrices {
  Eigen::SparseMatrix<double> stiffness;  // int grad(phi_i).grad(phi_j)
  Eigen::SparseMatrix<double> mass;       // int phi_i phi_j
};

OmegaMatrices assemble_omega(const OmegaMesh& mesh);

// L2-orthogonal projection of a scalar field onto the interior P1 space:
// solves  M p = (f, phi_i)  with element loads integrated by rules exact
// to degree >= 4 (3-point Gauss per cell in 1-d, a 6-point degree-4
// triangle rule in 2-d).
Eigen::VectorXd l2_project(const OmegaMesh& mesh, const OmegaMatrices& mats,
                           const ScalarField& f);

// Point value of the P1 function with interior coefficients U (zero on
// the boundary).  Points outside the closed domain throw
// std::domain_error.
double p1_evaluate(const OmegaMesh& mesh, const Eigen::VectorXd& U, double x1,
                   double x2 = 0.0);

// || u_h - exact ||_{L2(domain)} integrated element by element with the
// same degree >= 4 rules as l2_project.
double l2_error_elementwise(const OmegaMesh& mesh, const Eigen::VectorXd& U,
                            const ScalarField& exact);

}  // namespace fracwave
