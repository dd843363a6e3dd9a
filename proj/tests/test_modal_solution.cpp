// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
//
// Scalar oscillator closed forms against quadrature Duhamel integrals
// (including the resonant branch), finite-difference velocity checks,
// the assembled exact solutions of the two reference problems, and the
// cylinder profile psi with its weighted flux limit.
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fracwave/fractional.hpp"
#include "fracwave/modal_solution.hpp"
#include "fracwave/special_functions.hpp"

using fracwave::Domain;
using fracwave::ExactSolution;
using fracwave::ForcingShape;
using fracwave::ModalData;
using fracwave::modal_duhamel_quadrature;
using fracwave::modal_value;
using fracwave::modal_velocity;
using fracwave::psi_profile;
using fracwave::psi_profile_derivative;
using fracwave::SpectralBasis;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

double fd_velocity(double lambda, double s, const ModalData& data, double t) {
  const double h = 1e-6;
  return (modal_value(lambda, s, data, t + h) -
          modal_value(lambda, s, data, t - h)) /
         (2.0 * h);
}
}  // namespace

TEST_SUITE("modal_solution") {

TEST_CASE("free oscillation follows cos/sin at frequency lambda^{s/2}") {
  const double lambda = kPi * kPi;
  const double s = 0.5;
  const double omega = std::pow(lambda, s / 2.0);  // sqrt(pi)
  ModalData data;
  data.g = 0.7;
  data.h = -0.3;
  for (double t : {0.0, 0.3, 1.1, 2.9, 7.0}) {
    CAPTURE(t);
    const double want =
        0.7 * std::cos(omega * t) - 0.3 * std::sin(omega * t) / omega;
    CHECK(modal_value(lambda, s, data, t) ==
          doctest::Approx(want).epsilon(1e-13));
    const double want_v =
        -0.7 * omega * std::sin(omega * t) - 0.3 * std::cos(omega * t);
    CHECK(modal_velocity(lambda, s, data, t) ==
          doctest::Approx(want_v).epsilon(1e-13));
  }
}

TEST_CASE("sine forcing closed form matches the quadrature Duhamel") {
  const double lambda = 11.5;
  const double s = 0.65;
  ModalData data;
  data.shape = ForcingShape::sine;
  data.amp = 1.7;
  for (double t : {0.4, 1.3, 3.1}) {
    CAPTURE(t);
    const double closed = modal_value(lambda, s, data, t);
    const double quad = modal_duhamel_quadrature(
        lambda, s, [&](double r) { return 1.7 * std::sin(r); }, t, 128);
    CHECK(closed == doctest::Approx(quad).epsilon(1e-11));
  }
}

TEST_CASE("cosine forcing closed form matches the quadrature Duhamel") {
  const double lambda = 3.9;
  const double s = 0.25;
  ModalData data;
  data.shape = ForcingShape::cosine;
  data.amp = -0.9;
  for (double t : {0.5, 1.7, 4.2}) {
    CAPTURE(t);
    const double closed = modal_value(lambda, s, data, t);
    const double quad = modal_duhamel_quadrature(
        lambda, s, [&](double r) { return -0.9 * std::cos(r); }, t, 128);
    CHECK(closed == doctest::Approx(quad).epsilon(1e-11));
  }
}

TEST_CASE("resonant forcing (omega = 1) matches quadrature and textbook form") {
  // lambda = 1 gives omega = lambda^{s/2} = 1 for every s.
  const double lambda = 1.0;
  const double s = 0.4;
  ModalData sine;
  sine.shape = ForcingShape::sine;
  sine.amp = 2.0;
  ModalData cosine;
  cosine.shape = ForcingShape::cosine;
  cosine.amp = 2.0;
  for (double t : {0.3, 1.9, 6.5}) {
    CAPTURE(t);
    // u = A (sin t - t cos t)/2 for sine forcing.
    CHECK(modal_value(lambda, s, sine, t) ==
          doctest::Approx(2.0 * (std::sin(t) - t * std::cos(t)) / 2.0)
              .epsilon(1e-12));
    // u = A t sin t / 2 for cosine forcing.
    CHECK(modal_value(lambda, s, cosine, t) ==
          doctest::Approx(2.0 * t * std::sin(t) / 2.0).epsilon(1e-12));
    CHECK(modal_value(lambda, s, sine, t) ==
          doctest::Approx(modal_duhamel_quadrature(
                              lambda, s,
                              [](double r) { return 2.0 * std::sin(r); }, t,
                              256))
              .epsilon(1e-10));
  }
}

TEST_CASE("near-resonance is continuous across the branch switch") {
  // omega = 1 +- eps must approach the resonant value smoothly; this
  // guards against catastrophic cancellation in the off-resonance form.
  const double s = 0.5;
  ModalData sine;
  sine.shape = ForcingShape::sine;
  sine.amp = 1.0;
  const double t = 2.7;
  const double at_res = modal_value(1.0, s, sine, t);
  for (double eps : {1e-7, -1e-7, 1e-9, -1e-9}) {
    CAPTURE(eps);
    // omega = 1 + eps  <=>  lambda = (1+eps)^{2/s} = (1+eps)^4 at s=1/2.
    const double lambda = std::pow(1.0 + eps, 4.0);
    const double near = modal_value(lambda, s, sine, t);
    CHECK(std::abs(near - at_res) < 1e-5);
  }
}

TEST_CASE("velocity is the time derivative in every forcing regime") {
  const struct {
    double lambda;
    double s;
    ModalData data;
  } cases[] = {
      {7.3, 0.3, {0.5, -1.1, ForcingShape::none, 0.0}},
      {7.3, 0.3, {0.0, 0.0, ForcingShape::sine, 1.3}},
      {2.2, 0.8, {0.2, 0.1, ForcingShape::cosine, -0.7}},
      {1.0, 0.6, {0.0, 0.0, ForcingShape::sine, 1.0}},   // resonant
      {1.0, 0.6, {0.3, 0.0, ForcingShape::cosine, 1.0}}, // resonant
  };
  for (const auto& tc : cases) {
    for (double t : {0.8, 2.3}) {
      CAPTURE(tc.lambda);
      CAPTURE(t);
      const double fd = fd_velocity(tc.lambda, tc.s, tc.data, t);
      const double got = modal_velocity(tc.lambda, tc.s, tc.data, t);
      CHECK(std::abs(got - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("manufactured 1-d reference: u = sin(t) sin(pi x)") {
  // Mode 1 with h = 1/sqrt(2) and sine forcing amp = (pi^{2s}-1)/sqrt(2)
  // makes u_1(t) = sin(t)/sqrt(2), i.e. u = sin t sin(pi x).
  const double s = 0.75;
  const SpectralBasis basis(Domain::interval, 4);
  std::vector<ModalData> data(4);
  data[0].h = 1.0 / std::sqrt(2.0);
  data[0].shape = ForcingShape::sine;
  data[0].amp = (std::pow(kPi, 2.0 * s) - 1.0) / std::sqrt(2.0);
  const ExactSolution exact(basis, data, s);
  for (double t : {0.0, 0.6, kPi / 2.0}) {
    for (double x : {0.25, 0.5, 0.85}) {
      CAPTURE(t);
      CAPTURE(x);
      CHECK(exact.value(t, x) ==
            doctest::Approx(std::sin(t) * std::sin(kPi * x)).epsilon(1e-12));
      CHECK(exact.velocity(t, x) ==
            doctest::Approx(std::cos(t) * std::sin(kPi * x)).epsilon(1e-12));
    }
  }
  // Coefficient access at t = pi/2: only mode 1 is active.
  const Eigen::VectorXd c = exact.coefficients(kPi / 2.0);
  CHECK(c[0] == doctest::Approx(std::sin(kPi / 2.0) / std::sqrt(2.0))
                    .epsilon(1e-12));
  for (int k = 1; k < 4; ++k) CHECK(std::abs(c[k]) < 1e-15);
}

TEST_CASE("2-d standing wave oscillates at the fractional frequency") {
  const double s = 0.75;
  const double lambda = 2.0 * kPi * kPi;
  const SpectralBasis basis(Domain::square, 3);
  std::vector<ModalData> data(basis.size());
  int k22 = -1;
  for (int k = 0; k < basis.size(); ++k) {
    if (basis.mode(k).m == 2 && basis.mode(k).n == 2) k22 = k;
  }
  REQUIRE(k22 >= 0);
  data[k22].g = 1.0;
  const ExactSolution exact(basis, data, s);
  // Frozen frequency (2 pi^2)^{0.375}.
  const double omega = 3.0601918408794832543;
  for (double t : {0.0, 0.9, 1.5}) {
    const double x1 = 0.35, x2 = -0.6;
    CAPTURE(t);
    const double want =
        std::cos(omega * t) * std::sin(kPi * x1) * std::sin(kPi * x2);
    CHECK(exact.value(t, x1, x2) == doctest::Approx(want).epsilon(1e-12));
    const double want_v =
        -omega * std::sin(omega * t) * std::sin(kPi * x1) * std::sin(kPi * x2);
    CHECK(std::abs(exact.velocity(t, x1, x2) - want_v) < 1e-12 * omega);
    CHECK(std::pow(lambda, s / 2.0) ==
          doctest::Approx(omega).epsilon(1e-14));
  }
}

TEST_CASE("psi profile: boundary value, s = 1/2 exponential, monotonicity") {
  // psi(0) = 1 by the continuity convention.
  CHECK(psi_profile(0.3, 5.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  // At s = 1/2 the profile is exactly e^{-sqrt(lambda) y}.
  const double lambda = 4.0;
  for (double y : {0.1, 0.5, 1.7, 4.0}) {
    CAPTURE(y);
    CHECK(psi_profile(0.5, lambda, y) ==
          doctest::Approx(std::exp(-2.0 * y)).epsilon(1e-12));
  }
  // Strictly decreasing in y for the other orders.
  for (double s : {0.25, 0.75}) {
    double prev = psi_profile(s, 7.0, 1e-8);
    for (double y : {0.05, 0.2, 0.8, 2.0}) {
      const double cur = psi_profile(s, 7.0, y);
      CHECK(cur < prev);
      CHECK(cur > 0.0);
      prev = cur;
    }
  }
}

TEST_CASE("psi derivative matches central differences away from zero") {
  for (double s : {0.3, 0.5, 0.8}) {
    for (double y : {0.4, 1.1}) {
      CAPTURE(s);
      CAPTURE(y);
      const double lambda = 6.0;
      const double h = 1e-6;
      const double fd = (psi_profile(s, lambda, y + h) -
                         psi_profile(s, lambda, y - h)) /
                        (2.0 * h);
      const double got = psi_profile_derivative(s, lambda, y);
      CHECK(got == doctest::Approx(fd).epsilon(1e-7));
    }
  }
  CHECK_THROWS_AS(psi_profile_derivative(0.5, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(psi_profile_derivative(0.5, 1.0, -0.5), std::domain_error);
}

TEST_CASE("weighted flux limit y^alpha psi' -> -d_s lambda^s") {
  for (double s : {0.25, 0.5, 0.75}) {
    const auto frac = fracwave::make_fractional_order(s);
    const double lambda = 9.0;
    const double want = -frac.ds * std::pow(lambda, s);
    // The limit is approached like y^{2-2s}; y = 1e-10 leaves at most
    // ~1e-5 relative remainder even at s = 0.75.
    const double y = 1e-10;
    const double got =
        std::pow(y, frac.alpha) * psi_profile_derivative(s, lambda, y);
    CAPTURE(s);
    CHECK(got == doctest::Approx(want).epsilon(1e-4));
    // And the remainder shrinks as y decreases (limit really attained).
    const double coarse =
        std::pow(1e-4, frac.alpha) * psi_profile_derivative(s, lambda, 1e-4);
    CHECK(std::abs(got - want) <= std::abs(coarse - want) + 1e-12);
  }
}

}  // TEST_SUITE
