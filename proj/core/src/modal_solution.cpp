// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
#include "fracwave/modal_solution.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "fracwave/quadrature.hpp"
#include "fracwave/special_functions.hpp"

namespace fracwave {

namespace {

// Near omega = 1 the nonresonant closed forms lose digits to the
// (omega^2 - 1) denominator; inside this window the exact resonant
// limit is used instead (its error there is O(|omega-1| t^2)).
constexpr double kResonanceWindow = 1e-9;

double mode_frequency(double lambda, double s) {
  if (!(lambda > 0.0)) {
    throw std::domain_error("modal solution: eigenvalue must be positive");
  }
  return std::pow(lambda, 0.5 * s);
}

// Duhamel response (1/omega) int_0^t f(r) sin(omega (t-r)) dr for the
// closed-form shapes.
double duhamel_value(double omega, const ModalData& d, double t) {
  if (d.shape == ForcingShape::none || d.amp == 0.0) return 0.0;
  const bool resonant = std::abs(omega - 1.0) < kResonanceWindow;
  if (d.shape == ForcingShape::sine) {
    if (resonant) return d.amp * 0.5 * (std::sin(t) - t * std::cos(t));
    return d.amp * (omega * std::sin(t) - std::sin(omega * t)) /
           (omega * (omega * omega - 1.0));
  }
  // cosine
  if (resonant) return d.amp * 0.5 * t * std::sin(t);
  return d.amp * (std::cos(t) - std::cos(omega * t)) /
         (omega * omega - 1.0);
}

// d/dt of duhamel_value.
double duhamel_velocity(double omega, const ModalData& d, double t) {
  if (d.shape == ForcingShape::none || d.amp == 0.0) return 0.0;
  const bool resonant = std::abs(omega - 1.0) < kResonanceWindow;
  if (d.shape == ForcingShape::sine) {
    if (resonant) return d.amp * 0.5 * t * std::sin(t);
    return d.amp * (std::cos(t) - std::cos(omega * t)) /
           (omega * omega - 1.0);
  }
  // cosine
  if (resonant) return d.amp * 0.5 * (std::sin(t) + t * std::cos(t));
  return d.amp * (-std::sin(t) + omega * std::sin(omega * t)) /
         (omega * omega - 1.0);
}

}  // namespace

double modal_value(double lambda, double s, const ModalData& data, double t) {
  const double omega = mode_frequency(lambda, s);
  return data.g * std::cos(omega * t) +
         data.h * std::sin(omega * t) / omega + duhamel_value(omega, data, t);
}

double modal_velocity(double lambda, double s, const ModalData& data,
                      double t) {
  const double omega = mode_frequency(lambda, s);
  return -data.g * omega * std::sin(omega * t) +
         data.h * std::cos(omega * t) + duhamel_velocity(omega, data, t);
}

double modal_duhamel_quadrature(double lambda, double s,
                                const std::function<double(double)>& f,
                                double t, int panels) {
  if (t == 0.0) return 0.0;
  const double omega = mode_frequency(lambda, s);
  const GaussRule base = gauss_legendre(5);
  const double h = t / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const GaussRule local = map_to_interval(base, p * h, (p + 1) * h);
    for (int i = 0; i < 5; ++i) {
      const double r = local.nodes[i];
      acc += local.weights[i] * f(r) * std::sin(omega * (t - r));
    }
  }
  return acc / omega;
}

ExactSolution::ExactSolution(const SpectralBasis& basis,
                             std::vector<ModalData> data, double s)
    : basis_(basis), data_(std::move(data)), s_(s) {
  if (static_cast<int>(data_.size()) != basis_.size()) {
    throw std::invalid_argument(
        "ExactSolution: one ModalData entry per basis mode required");
  }
  if (!(s_ > 0.0) || !(s_ < 1.0)) {
    throw std::domain_error("ExactSolution: s must lie in (0,1)");
  }
  for (int k = 0; k < basis_.size(); ++k) {
    const ModalData& d = data_[k];
    if (d.g != 0.0 || d.h != 0.0 ||
        (d.shape != ForcingShape::none && d.amp != 0.0)) {
      active_.push_back(k);
    }
  }
}

double ExactSolution::value(double t, double x1, double x2) const {
  double acc = 0.0;
  for (int k : active_) {
    acc += modal_value(basis_.mode(k).lambda, s_, data_[k], t) *
           basis_.eval_mode(k, x1, x2);
  }
  return acc;
}

double ExactSolution::velocity(double t, double x1, double x2) const {
  double acc = 0.0;
  for (int k : active_) {
    acc += modal_velocity(basis_.mode(k).lambda, s_, data_[k], t) *
           basis_.eval_mode(k, x1, x2);
  }
  return acc;
}

Eigen::VectorXd ExactSolution::coefficients(double t) const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(basis_.size());
  for (int k : active_) {
    c[k] = modal_value(basis_.mode(k).lambda, s_, data_[k], t);
  }
  return c;
}

Eigen::VectorXd ExactSolution::velocity_coefficients(double t) const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(basis_.size());
  for (int k : active_) {
    c[k] = modal_velocity(basis_.mode(k).lambda, s_, data_[k], t);
  }
  return c;
}

double psi_profile(double s, double lambda, double y) {
  if (!(s > 0.0) || !(s < 1.0)) {
    throw std::domain_error("psi_profile: s must lie in (0,1)");
  }
  if (!(lambda > 0.0)) {
    throw std::domain_error("psi_profile: eigenvalue must be positive");
  }
  if (y < 0.0) {
    throw std::domain_error("psi_profile: y must be nonnegative");
  }
  if (y == 0.0) return 1.0;
  const double z = std::sqrt(lambda) * y;
  const double cs = std::pow(2.0, 1.0 - s) / gamma_positive(s);
  const BesselKResult k = bessel_k_info(s, z);
  if (k.underflowed) return 0.0;
  return cs * std::pow(z, s) * k.value;
}

double psi_profile_derivative(double s, double lambda, double y) {
  if (!(s > 0.0) || !(s < 1.0)) {
    throw std::domain_error("psi_profile_derivative: s must lie in (0,1)");
  }
  if (!(lambda > 0.0)) {
    throw std::domain_error(
        "psi_profile_derivative: eigenvalue must be positive");
  }
  if (!(y > 0.0)) {
    throw std::domain_error("psi_profile_derivative: y must be positive");
  }
  // d/dz [z^s K_s(z)] = -z^s K_{1-s}(z) (for 0 < s < 1), chain rule in
  // z = sqrt(lambda) y.
  const double z = std::sqrt(lambda) * y;
  const double cs = std::pow(2.0, 1.0 - s) / gamma_positive(s);
  const BesselKResult k = bessel_k_info(1.0 - s, z);
  if (k.underflowed) return 0.0;
  return -cs * std::sqrt(lambda) * std::pow(z, s) * k.value;
}

}  // namespace fracwave
