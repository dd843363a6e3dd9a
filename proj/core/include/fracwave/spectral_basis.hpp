// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
//
// Dirichlet eigenpairs of the Laplacian on the two supported domains,
// L2-orthonormal:
//
//   interval (0,1):    lambda_k = (k pi)^2,
//                      phi_k(x) = sqrt(2) sin(k pi x)
//   square (-1,1)^2:   lambda_{(m,n)} = pi^2 (m^2 + n^2) / 4,
//                      phi_{(m,n)}(x) = sin(m pi (x1+1)/2) sin(n pi (x2+1)/2)
//
// The fractional Laplacian is diagonal in this basis (multiplier
// lambda^s), so expanding data in it yields semi-analytic reference
// solutions and fractional Sobolev norms:
//
//   |v|_{H^r}^2 = sum_k lambda_k^r c_k^2,   c_k = (v, phi_k)_{L2}.
//
// Modes are kept sorted by eigenvalue (ties broken lexicographically by
// index pair) so truncation always removes the highest frequencies.
#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace fracwave {

enum class Domain { interval, square };

// Scalar field on the domain.  For the interval the second coordinate is
// passed as 0 and must be ignored by the callable.
using ScalarField = std::function<double(double, double)>;

struct SpectralMode {
  int m = 0;           // first index, >= 1
  int n = 0;           // second index, >= 1 for the square, 0 on the interval
  double lambda = 0.0; // Dirichlet eigenvalue
};

class SpectralBasis {
 public:
  // modes_per_direction: number of retained modes per coordinate
  // direction (so the square keeps its square).  Throws
  // std::invalid_argument when < 1.
  SpectralBasis(Domain domain, int modes_per_direction);

  Domain domain() const { return domain_; }
  int size() const { return static_cast<int>(modes_.size()); }
  const SpectralMode& mode(int k) const { return modes_[k]; }
  const std::vector<SpectralMode>& modes() const { return modes_; }

  // Value of the k-th (sorted) eigenfunction at a point.
  double eval_mode(int k, double x1, double x2 = 0.0) const;

 private:
  Domain domain_;
  std::vector<SpectralMode> modes_;
};

struct SpectralCoefficients {
  Eigen::VectorXd c;  // one coefficient per basis mode, in basis order
  // Fraction of the L2 mass carried by the last tenth of the retained
  // spectrum; a crude truncation indicator.
  double tail_ratio = 0.0;
  // Set when tail_ratio > 1e-10: the expansion probably needs more
  // modes (or the field is not resolved by this basis).
  bool tail_warning = false;
};

// L2 inner products (f, phi_k) by composite 5-point Gauss quadrature on a
// uniform panel grid (tensorized on the square).  panels_per_direction
// defaults to 4096, which over-resolves every field used in practice and
// keeps panel boundaries aligned with the mesh nodes of any power-of-two
// finite element grid, so piecewise-linear kinks never fall inside a
// panel.
SpectralCoefficients decompose(const SpectralBasis& basis,
                               const ScalarField& f,
                               int panels_per_direction = 4096);

// Fractional Sobolev seminorm of order r of sum_k c_k phi_k:
// sqrt(sum_k lambda_k^r c_k^2).  r = 0 is the plain L2 norm; r may be
// negative.
double hs_norm(const SpectralBasis& basis, const Eigen::VectorXd& coeffs,
               double r);

}  // namespace fracwave
