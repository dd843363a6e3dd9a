// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
//
// Closed-form evolution of one spectral mode of the fractional wave
// equation.  Writing u(t) = sum_k u_k(t) phi_k, each coefficient solves
// the scalar oscillator
//
//   u_k'' + omega^2 u_k = f_k(t),   omega = lambda_k^{s/2},
//   u_k(0) = g_k,  u_k'(0) = h_k,
//
// whose solution is
//
//   u_k(t) = g_k cos(omega t) + h_k sin(omega t)/omega
//            + (1/omega) int_0^t f_k(r) sin(omega (t-r)) dr.
//
// The Duhamel integral is evaluated in closed form for the forcing
// shapes used by the reference problems (none / amp*sin t / amp*cos t,
// including the resonant case omega = 1) and by composite Gaussian
// quadrature for arbitrary callables.
//
// Also here: the exact extended profile along the cylinder direction,
//
//   psi_lambda(y) = c_s (sqrt(lambda) y)^s K_s(sqrt(lambda) y),
//   c_s = 2^{1-s} / Gamma(s),
//
// with psi(0) = 1 and weighted flux  y^alpha psi'(y) -> -d_s lambda^s
// as y -> 0.
#pragma once

#include <functional>

#include <Eigen/Dense>

#include "fracwave/fractional.hpp"
#include "fracwave/spectral_basis.hpp"

namespace fracwave {

enum class ForcingShape { none, sine, cosine };

// Data of one mode: initial value, initial velocity, and a separable
// forcing amp * sin(t) or amp * cos(t).
struct ModalData {
  double g = 0.0;
  double h = 0.0;
  ForcingShape shape = ForcingShape::none;
  double amp = 0.0;
};

// u_k(t) for eigenvalue lambda and fractional order s.
double modal_value(double lambda, double s, const ModalData& data, double t);

// u_k'(t).
double modal_velocity(double lambda, double s, const ModalData& data,
                      double t);

// Duhamel term (1/omega) int_0^t f(r) sin(omega (t-r)) dr for an
// arbitrary forcing, by composite 5-point Gauss quadrature with `panels`
// uniform panels on (0, t).  Exposed for oracle checks against the
// closed forms.
double modal_duhamel_quadrature(double lambda, double s,
                                const std::function<double(double)>& f,
                                double t, int panels = 64);

// Exact modal solution of the full problem: per-mode data over a
// spectral basis, evaluated pointwise in space-time.
class ExactSolution {
 public:
  ExactSolution(const SpectralBasis& basis, std::vector<ModalData> data,
                double s);

  // u(t, x); the basis expansion is summed over all modes with nonzero
  // data.
  double value(double t, double x1, double x2 = 0.0) const;
  // time derivative of u at (t, x)
  double velocity(double t, double x1, double x2 = 0.0) const;

  // Coefficient vectors u_k(t), u_k'(t) in basis order.
  Eigen::VectorXd coefficients(double t) const;
  Eigen::VectorXd velocity_coefficients(double t) const;

  const SpectralBasis& basis() const { return basis_; }
  const std::vector<ModalData>& data() const { return data_; }

 private:
  const SpectralBasis& basis_;
  std::vector<ModalData> data_;
  double s_;
  std::vector<int> active_;  // indices of modes with nonzero data
};

// Extension profile psi_lambda(y) for y >= 0, with psi(0) = 1 taken by
// continuity.
double psi_profile(double s, double lambda, double y);

// d/dy psi_lambda(y) = -c_s sqrt(lambda) z^s K_{1-s}(z), z = sqrt(lambda) y.
// Defined for y > 0 only (as y -> 0 it diverges for s < 1/2); throws
// std::domain_error at y <= 0.  Callers needing the flux at the base use
// the weighted limit y^alpha psi' -> -d_s lambda^s directly.
double psi_profile_derivative(double s, double lambda, double y);

}  // namespace fracwave
