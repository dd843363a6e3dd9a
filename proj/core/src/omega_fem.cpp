// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
#include "fracwave/omega_fem.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fracwave/quadrature.hpp"

namespace fracwave {

namespace {

// Degree-4 rule on the reference triangle {l1+l2+l3=1}, weights
// normalized to sum to 1 (multiply by |T| when integrating).
struct TrianglePoint {
  double l1, l2, l3, w;
};

const std::vector<TrianglePoint>& triangle_rule_degree4() {
  static const std::vector<TrianglePoint> rule = [] {
    std::vector<TrianglePoint> pts;
    const double wa = 0.223381589678011;
    const double aa = 0.445948490915965;
    const double wb = 0.109951743655322;
    const double bb = 0.091576213509771;
    const double a1 = 1.0 - 2.0 * aa;  // 0.108103018168070
    const double b1 = 1.0 - 2.0 * bb;  // 0.816847572980459
    pts.push_back({a1, aa, aa, wa});
    pts.push_back({aa, a1, aa, wa});
    pts.push_back({aa, aa, a1, wa});
    pts.push_back({b1, bb, bb, wb});
    pts.push_back({bb, b1, bb, wb});
    pts.push_back({bb, bb, b1, wb});
    return pts;
  }();
  return rule;
}

}  // namespace

OmegaMesh::OmegaMesh(Domain domain, int n) : domain_(domain), n_(n) {
  if (n < 2) {
    throw std::invalid_argument(
        "OmegaMesh: need n >= 2 cells per direction (no interior node "
        "otherwise)");
  }
  if (domain_ == Domain::interval) {
    cell_h_ = 1.0 / n;
    h_t_ = cell_h_;
    num_interior_ = n - 1;
    interior_of_node_.assign(n + 1, -1);
    for (int i = 1; i < n; ++i) interior_of_node_[i] = i - 1;
  } else {
    cell_h_ = 2.0 / n;
    h_t_ = std::sqrt(2.0) * cell_h_;
    num_interior_ = (n - 1) * (n - 1);
    interior_of_node_.assign((n + 1) * (n + 1), -1);
    for (int j = 1; j < n; ++j) {
      for (int i = 1; i < n; ++i) {
        interior_of_node_[node_id(i, j)] = (j - 1) * (n - 1) + (i - 1);
      }
    }
    triangles_.reserve(2 * static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const int v00 = node_id(i, j);
        const int v10 = node_id(i + 1, j);
        const int v11 = node_id(i + 1, j + 1);
        const int v01 = node_id(i, j + 1);
        // both triangles share the diagonal v00 -- v11
        triangles_.push_back({{v00, v10, v11}});
        triangles_.push_back({{v00, v11, v01}});
      }
    }
  }
}

int OmegaMesh::num_nodes() const {
  return domain_ == Domain::interval ? n_ + 1 : (n_ + 1) * (n_ + 1);
}

int OmegaMesh::node_id(int i, int j) const {
  return domain_ == Domain::interval ? i : j * (n_ + 1) + i;
}

void OmegaMesh::node_coord(int node, double& x1, double& x2) const {
  if (domain_ == Domain::interval) {
    x1 = node * cell_h_;
    x2 = 0.0;
  } else {
    const int i = node % (n_ + 1);
    const int j = node / (n_ + 1);
    x1 = -1.0 + i * cell_h_;
    x2 = -1.0 + j * cell_h_;
  }
}

OmegaMatrices assemble_omega(const OmegaMesh& mesh) {
  const int nint = mesh.num_interior();
  OmegaMatrices out;
  out.stiffness.resize(nint, nint);
  out.mass.resize(nint, nint);
  std::vector<Eigen::Triplet<double>> ts, tm;

  if (mesh.domain() == Domain::interval) {
    const double h = mesh.cell_width();
    for (int r = 0; r < nint; ++r) {
      ts.emplace_back(r, r, 2.0 / h);
      tm.emplace_back(r, r, 2.0 * h / 3.0);
      if (r + 1 < nint) {
        ts.emplace_back(r, r + 1, -1.0 / h);
        ts.emplace_back(r + 1, r, -1.0 / h);
        tm.emplace_back(r, r + 1, h / 6.0);
        tm.emplace_back(r + 1, r, h / 6.0);
      }
    }
  } else {
    for (const OmegaTriangle& tri : mesh.triangles()) {
      double x[3], y[3];
      for (int a = 0; a < 3; ++a) {
        mesh.node_coord(tri.v[a], x[a], y[a]);
      }
      const double two_area = (x[1] - x[0]) * (y[2] - y[0]) -
                              (x[2] - x[0]) * (y[1] - y[0]);
      const double area = 0.5 * std::abs(two_area);
      // gradients of the barycentric functions:
      // grad l_a = (b_a, c_a) / (2|T|)
      double b[3], c[3];
      for (int a = 0; a < 3; ++a) {
        const int a1 = (a + 1) % 3, a2 = (a + 2) % 3;
        b[a] = y[a1] - y[a2];
        c[a] = x[a2] - x[a1];
      }
      for (int a = 0; a < 3; ++a) {
        const int ra = mesh.interior_index_of_node(tri.v[a]);
        if (ra < 0) continue;
        for (int bidx = 0; bidx < 3; ++bidx) {
          const int rb = mesh.interior_index_of_node(tri.v[bidx]);
          if (rb < 0) continue;
          const double k = (b[a] * b[bidx] + c[a] * c[bidx]) / (4.0 * area);
          const double m = area * (a == bidx ? 2.0 : 1.0) / 12.0;
          ts.emplace_back(ra, rb, k);
          tm.emplace_back(ra, rb, m);
        }
      }
    }
  }
  out.stiffness.setFromTriplets(ts.begin(), ts.end());
  out.mass.setFromTriplets(tm.begin(), tm.end());
  out.stiffness.makeCompressed();
  out.mass.makeCompressed();
  return out;
}

namespace {

Eigen::VectorXd assemble_load(const OmegaMesh& mesh, const ScalarField& f) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.num_interior());
  if (mesh.domain() == Domain::interval) {
    const double h = mesh.cell_width();
    const GaussRule base = gauss_legendre(3);
    const int n = mesh.cells_per_direction();
    for (int cell = 0; cell < n; ++cell) {
      const double a = cell * h;
      const GaussRule local = map_to_interval(base, a, a + h);
      for (int q = 0; q < 3; ++q) {
        const double xq = local.nodes[q];
        const double fw = local.weights[q] * f(xq, 0.0);
        const double xi = (xq - a) / h;
        const int left = mesh.interior_index_of_node(mesh.node_id(cell));
        const int right = mesh.interior_index_of_node(mesh.node_id(cell + 1));
        if (left >= 0) load[left] += fw * (1.0 - xi);
        if (right >= 0) load[right] += fw * xi;
      }
    }
  } else {
    const auto& rule = triangle_rule_degree4();
    for (const OmegaTriangle& tri : mesh.triangles()) {
      double x[3], y[3];
      for (int a = 0; a < 3; ++a) mesh.node_coord(tri.v[a], x[a], y[a]);
      const double area =
          0.5 * std::abs((x[1] - x[0]) * (y[2] - y[0]) -
                         (x[2] - x[0]) * (y[1] - y[0]));
      for (const TrianglePoint& p : rule) {
        const double xq = p.l1 * x[0] + p.l2 * x[1] + p.l3 * x[2];
        const double yq = p.l1 * y[0] + p.l2 * y[1] + p.l3 * y[2];
        const double fw = area * p.w * f(xq, yq);
        const double lam[3] = {p.l1, p.l2, p.l3};
        for (int a = 0; a < 3; ++a) {
          const int ra = mesh.interior_index_of_node(tri.v[a]);
          if (ra >= 0) load[ra] += fw * lam[a];
        }
      }
    }
  }
  return load;
}

}  // namespace

Eigen::VectorXd l2_project(const OmegaMesh& mesh, const OmegaMatrices& mats,
                           const ScalarField& f) {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(mats.mass);
  if (chol.info() != Eigen::Success) {
    throw std::runtime_error("l2_project: mass factorization failed");
  }
  return chol.solve(assemble_load(mesh, f));
}

double p1_evaluate(const OmegaMesh& mesh, const Eigen::VectorXd& U, double x1,
                   double x2) {
  if (U.size() != mesh.num_interior()) {
    throw std::invalid_argument(
        "p1_evaluate: coefficient size does not match interior dof count");
  }
  auto value_at_node = [&](int node) {
    const int idx = mesh.interior_index_of_node(node);
    return idx >= 0 ? U[idx] : 0.0;
  };
  const int n = mesh.cells_per_direction();
  const double h = mesh.cell_width();

  if (mesh.domain() == Domain::interval) {
    if (x1 < 0.0 || x1 > 1.0) {
      throw std::domain_error("p1_evaluate: point outside the interval");
    }
    int cell = std::min(static_cast<int>(x1 / h), n - 1);
    const double xi = (x1 - cell * h) / h;
    return value_at_node(mesh.node_id(cell)) * (1.0 - xi) +
           value_at_node(mesh.node_id(cell + 1)) * xi;
  }

  if (x1 < -1.0 || x1 > 1.0 || x2 < -1.0 || x2 > 1.0) {
    throw std::domain_error("p1_evaluate: point outside the square");
  }
  const int ci = std::min(static_cast<int>((x1 + 1.0) / h), n - 1);
  const int cj = std::min(static_cast<int>((x2 + 1.0) / h), n - 1);
  const double xi = (x1 + 1.0 - ci * h) / h;
  const double ze = (x2 + 1.0 - cj * h) / h;
  const double u00 = value_at_node(mesh.node_id(ci, cj));
  const double u10 = value_at_node(mesh.node_id(ci + 1, cj));
  const double u11 = value_at_node(mesh.node_id(ci + 1, cj + 1));
  const double u01 = value_at_node(mesh.node_id(ci, cj + 1));
  if (ze <= xi) {
    // triangle {v00, v10, v11}: barycentric (1-xi, xi-ze, ze)
    return u00 * (1.0 - xi) + u10 * (xi - ze) + u11 * ze;
  }
  // triangle {v00, v11, v01}: barycentric (1-ze, xi, ze-xi)
  return u00 * (1.0 - ze) + u11 * xi + u01 * (ze - xi);
}

double l2_error_elementwise(const OmegaMesh& mesh, const Eigen::VectorXd& U,
                            const ScalarField& exact) {
  if (U.size() != mesh.num_interior()) {
    throw std::invalid_argument(
        "l2_error_elementwise: coefficient size mismatch");
  }
  auto value_at_node = [&](int node) {
    const int idx = mesh.interior_index_of_node(node);
    return idx >= 0 ? U[idx] : 0.0;
  };
  double acc = 0.0;
  if (mesh.domain() == Domain::interval) {
    const double h = mesh.cell_width();
    const GaussRule base = gauss_legendre(3);
    for (int cell = 0; cell < mesh.cells_per_direction(); ++cell) {
      const double a = cell * h;
      const GaussRule local = map_to_interval(base, a, a + h);
      const double ul = value_at_node(mesh.node_id(cell));
      const double ur = value_at_node(mesh.node_id(cell + 1));
      for (int q = 0; q < 3; ++q) {
        const double xi = (local.nodes[q] - a) / h;
        const double diff = ul * (1.0 - xi) + ur * xi -
                            exact(local.nodes[q], 0.0);
        acc += local.weights[q] * diff * diff;
      }
    }
  } else {
    const auto& rule = triangle_rule_degree4();
    for (const OmegaTriangle& tri : mesh.triangles()) {
      double x[3], y[3], uv[3];
      for (int a = 0; a < 3; ++a) {
        mesh.node_coord(tri.v[a], x[a], y[a]);
        uv[a] = value_at_node(tri.v[a]);
      }
      const double area =
          0.5 * std::abs((x[1] - x[0]) * (y[2] - y[0]) -
                         (x[2] - x[0]) * (y[1] - y[0]));
      for (const TrianglePoint& p : rule) {
        const double xq = p.l1 * x[0] + p.l2 * x[1] + p.l3 * x[2];
        const double yq = p.l1 * y[0] + p.l2 * y[1] + p.l3 * y[2];
        const double diff =
            p.l1 * uv[0] + p.l2 * uv[1] + p.l3 * uv[2] - exact(xq, yq);
        acc += area * p.w * diff * diff;
      }
    }
  }
  return std::sqrt(acc);
}

}  // namespace fracwave
