// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
#include "fracwave/spectral_basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracwave/quadrature.hpp"

namespace fracwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Quadrature points of the composite 5-point Gauss rule on (lo, hi) with
// `panels` uniform panels, flattened in ascending order.
void composite_gauss(double lo, double hi, int panels, Eigen::VectorXd& pts,
                     Eigen::VectorXd& wts) {
  const GaussRule base = gauss_legendre(5);
  const double h = (hi - lo) / panels;
  pts.resize(5 * panels);
  wts.resize(5 * panels);
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * h;
    const GaussRule local = map_to_interval(base, a, a + h);
    pts.segment(5 * p, 5) = local.nodes;
    wts.segment(5 * p, 5) = local.weights;
  }
}

}  // namespace

SpectralBasis::SpectralBasis(Domain domain, int modes_per_direction)
    : domain_(domain) {
  if (modes_per_direction < 1) {
    throw std::invalid_argument(
        "SpectralBasis: need at least one mode per direction");
  }
  if (domain_ == Domain::interval) {
    modes_.reserve(modes_per_direction);
    for (int k = 1; k <= modes_per_direction; ++k) {
      modes_.push_back({k, 0, (k * kPi) * (k * kPi)});
    }
  } else {
    modes_.reserve(static_cast<std::size_t>(modes_per_direction) *
                   modes_per_direction);
    for (int m = 1; m <= modes_per_direction; ++m) {
      for (int n = 1; n <= modes_per_direction; ++n) {
        const double lambda = kPi * kPi * (m * m + n * n) / 4.0;
        modes_.push_back({m, n, lambda});
      }
    }
    std::sort(modes_.begin(), modes_.end(),
              [](const SpectralMode& a, const SpectralMode& b) {
                if (a.lambda != b.lambda) return a.lambda < b.lambda;
                if (a.m != b.m) return a.m < b.m;
                return a.n < b.n;
              });
  }
}

double SpectralBasis::eval_mode(int k, double x1, double x2) const {
  const SpectralMode& md = modes_.at(k);
  if (domain_ == Domain::interval) {
    return std::sqrt(2.0) * std::sin(md.m * kPi * x1);
  }
  return std::sin(md.m * kPi * (x1 + 1.0) / 2.0) *
         std::sin(md.n * kPi * (x2 + 1.0) / 2.0);
}

SpectralCoefficients decompose(const SpectralBasis& basis,
                               const ScalarField& f,
                               int panels_per_direction) {
  if (panels_per_direction < 1) {
    throw std::invalid_argument("decompose: need at least one panel");
  }
  const int num_modes = basis.size();
  SpectralCoefficients result;
  result.c.setZero(num_modes);

  if (basis.domain() == Domain::interval) {
    Eigen::VectorXd pts, wts;
    composite_gauss(0.0, 1.0, panels_per_direction, pts, wts);
    const int nq = static_cast<int>(pts.size());
    Eigen::VectorXd fw(nq);
    for (int i = 0; i < nq; ++i) fw[i] = wts[i] * f(pts[i], 0.0);
    for (int k = 0; k < num_modes; ++k) {
      const int m = basis.mode(k).m;
      double acc = 0.0;
      for (int i = 0; i < nq; ++i) {
        acc += fw[i] * std::sin(m * kPi * pts[i]);
      }
      result.c[k] = std::sqrt(2.0) * acc;
    }
  } else {
    // Separable two-stage transform.  Stage 1 contracts the x1 direction
    // against each 1-d sine factor (a dense GEMM over blocks of rows of
    // the tensor quadrature grid); stage 2 contracts the x2 direction.
    Eigen::VectorXd pts, wts;
    composite_gauss(-1.0, 1.0, panels_per_direction, pts, wts);
    const int nq = static_cast<int>(pts.size());

    int dir_modes = 0;  // modes per direction actually present
    for (const SpectralMode& md : basis.modes()) {
      dir_modes = std::max({dir_modes, md.m, md.n});
    }

    // sines(m-1, i) = sin(m pi (x_i + 1)/2) * w_i
    Eigen::MatrixXd sines(dir_modes, nq);
    for (int m = 1; m <= dir_modes; ++m) {
      for (int i = 0; i < nq; ++i) {
        sines(m - 1, i) = std::sin(m * kPi * (pts[i] + 1.0) / 2.0) * wts[i];
      }
    }

    // inner(m-1, j) = sum_i w_i f(x_i, y_j) sin(m pi (x_i+1)/2)
    Eigen::MatrixXd inner(dir_modes, nq);
    const int block = 128;
    Eigen::MatrixXd fvals(nq, block);
    for (int j0 = 0; j0 < nq; j0 += block) {
      const int cols = std::min(block, nq - j0);
      for (int j = 0; j < cols; ++j) {
        const double y = pts[j0 + j];
        for (int i = 0; i < nq; ++i) fvals(i, j) = f(pts[i], y);
      }
      inner.middleCols(j0, cols).noalias() =
          sines * fvals.leftCols(cols);
    }

    // outer(m-1, n-1) = sum_j w_j inner(m-1, j) sin(n pi (y_j+1)/2)
    Eigen::MatrixXd outer(dir_modes, dir_modes);
    outer.noalias() = inner * sines.transpose();

    for (int k = 0; k < num_modes; ++k) {
      const SpectralMode& md = basis.mode(k);
      result.c[k] = outer(md.m - 1, md.n - 1);
    }
  }

  // Truncation indicator: L2 mass in the last tenth of the retained
  // (eigenvalue-sorted) spectrum relative to the total.
  const double total = result.c.squaredNorm();
  const int tail_start = num_modes - std::max(1, num_modes / 10);
  const double tail = result.c.tail(num_modes - tail_start).squaredNorm();
  result.tail_ratio = (total > 0.0) ? tail / total : 0.0;
  result.tail_warning = result.tail_ratio > 1e-10;
  return result;
}

double hs_norm(const SpectralBasis& basis, const Eigen::VectorXd& coeffs,
               double r) {
  if (coeffs.size() != basis.size()) {
    throw std::invalid_argument(
        "hs_norm: coefficient count does not match basis size");
  }
  double acc = 0.0;
  for (int k = 0; k < basis.size(); ++k) {
    acc += std::pow(basis.mode(k).lambda, r) * coeffs[k] * coeffs[k];
  }
  return std::sqrt(acc);
}

}  // namespace fracwave
