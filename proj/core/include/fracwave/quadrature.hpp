// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
//
// Gaussian quadrature rules on the reference interval (-1,1), generated
// at run time by the Golub-Welsch algorithm: the nodes are the
// eigenvalues of the symmetrized Jacobi matrix of the three-term
// recurrence for the orthogonal polynomial family, the weights come from
// the first components of its eigenvectors.  Two families are needed:
//
//   gauss_legendre(n)        weight 1           (smooth integrands)
//   gauss_jacobi(n, a, b)    weight (1-x)^a (1+x)^b
//
// The Jacobi family with a = 0, b = alpha integrates the degenerate
// cylinder weight y^alpha exactly on the element touching y = 0.
// An n-point rule of either family is exact for polynomials (times the
// weight) of degree <= 2n - 1.
#pragma once

#include <Eigen/Dense>

namespace fracwave {

struct GaussRule {
  Eigen::VectorXd nodes;    // ascending, inside (-1,1)
  Eigen::VectorXd weights;  // positive, sum = integral of the weight
};

// n-point Gauss-Legendre rule on (-1,1).  Throws std::invalid_argument
// for n < 1.
GaussRule gauss_legendre(int n);

// n-point Gauss-Jacobi rule on (-1,1) with weight (1-x)^a (1+x)^b,
// a, b > -1.  Throws std::invalid_argument for n < 1 or exponents <= -1.
GaussRule gauss_jacobi(int n, double a, double b);

// Affine image of a rule on (lo, hi) for weight-1 integration:
// nodes mapped by x = (lo+hi)/2 + (hi-lo)/2 * t, weights scaled by
// (hi-lo)/2.
GaussRule map_to_interval(const GaussRule& rule, double lo, double hi);

}  // namespace fracwave
