// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
//
// hp discretization of the extended direction y on (0, Y): a mesh graded
// geometrically toward the degenerate end y = 0,
//
//   breakpoints:  0,  Y sigma^{M-1},  Y sigma^{M-2},  ...,  Y sigma,  Y,
//
// with polynomial degree growing linearly away from 0 (r_m = max(1,
// ceil(slope * m)) on the m-th element counted from the origin).  The
// basis is nodal hats at the breakpoints (the one at y = Y is dropped:
// homogeneous Dirichlet at the truncation height) plus internal
// integrated-Legendre bubbles
//
//   N_j(xi) = (P_j(xi) - P_{j-2}(xi)) / (2j - 1),   j = 2..r_m,
//
// whose xi-derivative is the Legendre polynomial P_{j-1}.  Basis index 0
// is the hat at y = 0; it carries the trace degrees of freedom of the
// extension.
//
// The weighted Gram matrices
//
//   mass(i,j)      = int_0^Y y^alpha  b_i(y)  b_j(y)  dy
//   stiffness(i,j) = int_0^Y y^alpha  b_i'(y) b_j'(y) dy
//
// are integrated with a Gauss-Jacobi rule on the element touching y = 0
// (the weight (1+xi)^alpha is built into the rule, so entries there are
// exact for polynomials) and Gauss-Legendre rules elsewhere, with the
// point count raised enough that the analytic factor y^alpha is resolved
// to machine accuracy regardless of the grading ratio.
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fracwave/quadrature.hpp"

namespace fracwave {

struct GeometricMesh {
  double Y = 1.0;      // truncation height
  int M = 1;           // number of elements
  double sigma = 0.5;  // grading ratio, in (0,1)
  // M+1 ascending values; [0] = 0, [M] = Y
  std::vector<double> breakpoints;
};

// Validates Y > 0, M >= 1, sigma in (0,1).
GeometricMesh build_geometric_mesh(double Y, int M, double sigma);

struct DegreeVector {
  std::vector<int> r;  // degree of element m at index m-1, each >= 1
  int max_degree = 1;
};

// r_m = max(1, ceil(slope * m)); slope > 0.
DegreeVector build_degree_vector(int M, double slope);

// Quadrature rule for one element (1-based index) such that
//   sum_i w[i] F(y[i])  ~=  int_element y^alpha F(y) dy.
// On the first element (touching the weight's singular end) the rule is
// exact for polynomial F up to degree 2*max_degree + 5; on the others
// the polynomial part is exact to the same degree and the analytic
// weight factor contributes only a machine-accuracy remainder.  xi holds
// the reference coordinates in (-1,1) of the nodes.
struct ElementRule {
  Eigen::VectorXd xi;
  Eigen::VectorXd y;
  Eigen::VectorXd w;
};
ElementRule element_rule(const GeometricMesh& mesh, int element, double alpha,
                         int max_degree);

struct HpSpaceY {
  GeometricMesh mesh;
  DegreeVector degrees;
  double alpha = 0.0;
  int dim = 0;  // M vertex hats + sum_m (r_m - 1) bubbles = sum_m r_m
  Eigen::MatrixXd mass;       // weighted L2 Gram matrix
  Eigen::MatrixXd stiffness;  // weighted H1-seminorm Gram matrix
};

HpSpaceY assemble_weighted_matrices(const GeometricMesh& mesh,
                                    const DegreeVector& degrees, double alpha);

// Value at y of the i-th basis function of the space (vertex hats first,
// by breakpoint index; then bubbles element by element, ascending j).
// Used for plotting and for comparing discrete extensions against the
// analytic profile.
double eval_hp_basis(const HpSpaceY& space, int i, double y);

}  // namespace fracwave
