// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
#include "fracwave/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "fracwave/special_functions.hpp"

namespace fracwave {

namespace {

// Nodes and weights from the recurrence coefficients
//   p_{k+1} = (x - a_k) p_k - b_k p_{k-1},
// via the symmetric tridiagonal Jacobi matrix with diagonal a_k and
// off-diagonal sqrt(b_k); mu0 is the total mass of the weight.
GaussRule golub_welsch(const Eigen::VectorXd& diag,
                       const Eigen::VectorXd& offdiag_squared, double mu0) {
  const int n = static_cast<int>(diag.size());
  Eigen::VectorXd subdiag(n > 1 ? n - 1 : 0);
  for (int k = 0; k + 1 < n; ++k) subdiag[k] = std::sqrt(offdiag_squared[k]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, subdiag, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("golub_welsch: tridiagonal eigensolve failed");
  }

  GaussRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(n);
  for (int j = 0; j < n; ++j) {
    const double v0 = solver.eigenvectors()(0, j);
    rule.weights[j] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace

GaussRule gauss_jacobi(int n, double a, double b) {
  if (n < 1) {
    throw std::invalid_argument("gauss_jacobi: need at least one node");
  }
  if (!(a > -1.0) || !(b > -1.0)) {
    throw std::invalid_argument(
        "gauss_jacobi: weight exponents must exceed -1");
  }

  Eigen::VectorXd diag(n), off2(n > 1 ? n - 1 : 0);
  const double apb = a + b;
  diag[0] = (b - a) / (apb + 2.0);
  for (int k = 1; k < n; ++k) {
    const double den = (2.0 * k + apb) * (2.0 * k + apb + 2.0);
    diag[k] = (b * b - a * a) / den;
  }
  if (n > 1) {
    off2[0] = 4.0 * (a + 1.0) * (b + 1.0) /
              ((apb + 2.0) * (apb + 2.0) * (apb + 3.0));
    for (int k = 2; k < n; ++k) {
      const double t = 2.0 * k + apb;
      off2[k - 1] = 4.0 * k * (k + a) * (k + b) * (k + apb) /
                    (t * t * (t + 1.0) * (t - 1.0));
    }
  }

  // mu0 = int_{-1}^{1} (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1).
  const double mu0 = std::pow(2.0, apb + 1.0) * gamma_positive(a + 1.0) *
                     gamma_positive(b + 1.0) / gamma_positive(apb + 2.0);
  return golub_welsch(diag, off2, mu0);
}

GaussRule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

GaussRule map_to_interval(const GaussRule& rule, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  GaussRule mapped;
  mapped.nodes = (rule.nodes.array() * half + mid).matrix();
  mapped.weights = rule.weights * half;
  return mapped;
}

}  // namespace fracwave
