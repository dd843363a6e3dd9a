// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
#include "fracwave/extended_mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracwave {

GeometricMesh build_geometric_mesh(double Y, int M, double sigma) {
  if (!(Y > 0.0)) {
    throw std::invalid_argument("build_geometric_mesh: Y must be positive");
  }
  if (M < 1) {
    throw std::invalid_argument(
        "build_geometric_mesh: need at least one element");
  }
  if (!(sigma > 0.0) || !(sigma < 1.0)) {
    throw std::invalid_argument(
        "build_geometric_mesh: grading ratio must lie in (0,1)");
  }
  GeometricMesh mesh;
  mesh.Y = Y;
  mesh.M = M;
  mesh.sigma = sigma;
  mesh.breakpoints.resize(M + 1);
  mesh.breakpoints[0] = 0.0;
  for (int m = 1; m <= M; ++m) {
    mesh.breakpoints[m] = Y * std::pow(sigma, M - m);
  }
  return mesh;
}

DegreeVector build_degree_vector(int M, double slope) {
  if (M < 1) {
    throw std::invalid_argument("build_degree_vector: need M >= 1");
  }
  if (!(slope > 0.0)) {
    throw std::invalid_argument("build_degree_vector: slope must be positive");
  }
  DegreeVector deg;
  deg.r.resize(M);
  for (int m = 1; m <= M; ++m) {
    deg.r[m - 1] = std::max(1, static_cast<int>(std::ceil(slope * m)));
    deg.max_degree = std::max(deg.max_degree, deg.r[m - 1]);
  }
  return deg;
}

ElementRule element_rule(const GeometricMesh& mesh, int element, double alpha,
                         int max_degree) {
  if (element < 1 || element > mesh.M) {
    throw std::invalid_argument("element_rule: element index out of range");
  }
  if (!(alpha > -1.0) || !(alpha < 1.0)) {
    throw std::invalid_argument(
        "element_rule: weight exponent must lie in (-1,1)");
  }
  const double a = mesh.breakpoints[element - 1];
  const double b = mesh.breakpoints[element];
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);

  ElementRule rule;
  if (element == 1) {
    // y = b (1+xi)/2 maps (-1,1) to (0,b); the weight y^alpha becomes
    // (b/2)^alpha (1+xi)^alpha and is absorbed into the Jacobi rule, so
    // polynomial integrands are integrated exactly.
    const int n = max_degree + 3;
    const GaussRule gj = gauss_jacobi(n, 0.0, alpha);
    const double scale = std::pow(0.5 * b, alpha + 1.0);
    rule.xi = gj.nodes;
    rule.y = (gj.nodes.array() * half + mid).matrix();
    rule.w = gj.weights * scale;
    return rule;
  }

  // Away from y = 0 the weight is analytic; a Gauss-Legendre rule with a
  // few extra points resolves it to machine accuracy.  The number of
  // extra points follows from the convergence factor rho of Gauss
  // quadrature for functions analytic inside the Bernstein ellipse
  // through the singularity at y = 0 (reference coordinate -(b+a)/(b-a)).
  const double xi_hat = (b + a) / (b - a);
  const double rho = xi_hat + std::sqrt(xi_hat * xi_hat - 1.0);
  const int n_extra =
      static_cast<int>(std::ceil(8.0 / std::log10(rho))) + 2;
  const int n = max_degree + 3 + n_extra;
  const GaussRule gl = gauss_legendre(n);
  rule.xi = gl.nodes;
  rule.y = (gl.nodes.array() * half + mid).matrix();
  rule.w.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.w[i] = gl.weights[i] * half * std::pow(rule.y[i], alpha);
  }
  return rule;
}

namespace {

// P_0..P_kmax at xi, by the three-term recurrence.
void legendre_values(double xi, int kmax, std::vector<double>& p) {
  p.resize(kmax + 1);
  p[0] = 1.0;
  if (kmax >= 1) p[1] = xi;
  for (int k = 1; k < kmax; ++k) {
    p[k + 1] = ((2.0 * k + 1.0) * xi * p[k] - k * p[k - 1]) / (k + 1.0);
  }
}

double bubble_value(const std::vector<double>& p, int j) {
  return (p[j] - p[j - 2]) / (2.0 * j - 1.0);
}

}  // namespace

HpSpaceY assemble_weighted_matrices(const GeometricMesh& mesh,
                                    const DegreeVector& degrees,
                                    double alpha) {
  if (static_cast<int>(degrees.r.size()) != mesh.M) {
    throw std::invalid_argument(
        "assemble_weighted_matrices: one degree per element required");
  }
  HpSpaceY space;
  space.mesh = mesh;
  space.degrees = degrees;
  space.alpha = alpha;

  const int M = mesh.M;
  int dim = M;  // vertex hats at breakpoints 0..M-1
  std::vector<int> bubble_offset(M);  // global index of first bubble of elem m
  for (int m = 1; m <= M; ++m) {
    bubble_offset[m - 1] = dim;
    dim += degrees.r[m - 1] - 1;
  }
  space.dim = dim;
  space.mass = Eigen::MatrixXd::Zero(dim, dim);
  space.stiffness = Eigen::MatrixXd::Zero(dim, dim);

  std::vector<double> legendre;
  for (int m = 1; m <= M; ++m) {
    const int r = degrees.r[m - 1];
    const double h = mesh.breakpoints[m] - mesh.breakpoints[m - 1];
    const ElementRule rule = element_rule(mesh, m, alpha, degrees.max_degree);

    // local dofs: left vertex, right vertex (dropped on the last
    // element), bubbles j = 2..r
    std::vector<int> global;
    global.push_back(m - 1);
    if (m <= M - 1) global.push_back(m);
    for (int j = 2; j <= r; ++j) {
      global.push_back(bubble_offset[m - 1] + (j - 2));
    }
    const int nloc = static_cast<int>(global.size());

    const int nq = static_cast<int>(rule.xi.size());
    Eigen::MatrixXd val(nloc, nq), der(nloc, nq);  // der in y-units
    for (int q = 0; q < nq; ++q) {
      const double xi = rule.xi[q];
      legendre_values(xi, std::max(1, r), legendre);
      int loc = 0;
      val(loc, q) = 0.5 * (1.0 - xi);
      der(loc, q) = -1.0 / h;
      ++loc;
      if (m <= M - 1) {
        val(loc, q) = 0.5 * (1.0 + xi);
        der(loc, q) = 1.0 / h;
        ++loc;
      }
      for (int j = 2; j <= r; ++j, ++loc) {
        val(loc, q) = bubble_value(legendre, j);
        der(loc, q) = legendre[j - 1] * 2.0 / h;
      }
    }

    for (int a = 0; a < nloc; ++a) {
      for (int b = 0; b < nloc; ++b) {
        double acc_m = 0.0, acc_s = 0.0;
        for (int q = 0; q < nq; ++q) {
          acc_m += rule.w[q] * val(a, q) * val(b, q);
          acc_s += rule.w[q] * der(a, q) * der(b, q);
        }
        space.mass(global[a], global[b]) += acc_m;
        space.stiffness(global[a], global[b]) += acc_s;
      }
    }
  }
  return space;
}

double eval_hp_basis(const HpSpaceY& space, int i, double y) {
  const GeometricMesh& mesh = space.mesh;
  if (i < 0 || i >= space.dim) {
    throw std::invalid_argument("eval_hp_basis: basis index out of range");
  }
  if (y < 0.0 || y > mesh.Y) {
    throw std::domain_error("eval_hp_basis: y outside (0, Y)");
  }
  const int M = mesh.M;
  if (i < M) {
    // vertex hat at breakpoints[i]
    const double yi = mesh.breakpoints[i];
    if (i > 0 && y <= yi) {
      const double yl = mesh.breakpoints[i - 1];
      return y <= yl ? 0.0 : (y - yl) / (yi - yl);
    }
    if (y >= yi) {
      const double yr = mesh.breakpoints[i + 1];
      return y >= yr ? 0.0 : (yr - y) / (yr - yi);
    }
    return 0.0;
  }
  // bubble: find its element and mode number
  int idx = i - M;
  for (int m = 1; m <= M; ++m) {
    const int nb = space.degrees.r[m - 1] - 1;
    if (idx < nb) {
      const int j = 2 + idx;
      const double a = mesh.breakpoints[m - 1];
      const double b = mesh.breakpoints[m];
      if (y < a || y > b) return 0.0;
      const double xi = 2.0 * (y - a) / (b - a) - 1.0;
      std::vector<double> legendre;
      legendre_values(xi, j, legendre);
      return bubble_value(legendre, j);
    }
    idx -= nb;
  }
  return 0.0;  // unreachable
}

}  // namespace fracwave
