// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
//
// Real-order modified Bessel function of the second kind K_nu(z) and the
// Gamma function on the positive half-line.  K_nu is what the exact
// extension profile is made of:
//
//   psi(y) = c_s * (sqrt(lambda) y)^s * K_s(sqrt(lambda) y),
//
// so its accuracy floor propagates directly into every semi-analytic
// reference solution used by the tests.  Three evaluation regimes are
// stitched together (series near 0, a continued fraction in the middle,
// the divergent-but-asymptotic expansion for large argument); the
// crossover points were chosen so each regime is well inside its region
// of full double accuracy, and the seams are covered by an independent
// quadrature oracle in the test suite.
#pragma once

namespace fracwave {

// Gamma(x) for x > 0.  Throws std::domain_error for x <= 0 (the poles and
// the reflection side are deliberately out of contract).
double gamma_positive(double x);

struct BesselKResult {
  double value = 0.0;
  // K_nu(z) decays like e^{-z}; past z ~ 705 the result is below the
  // smallest positive double.  We return 0 and set this flag instead of
  // raising an error, so callers integrating far down the cylinder can
  // treat the tail as exactly zero on purpose.
  bool underflowed = false;
};

// K_nu(z) for order nu >= 0 and argument z > 0.  Throws std::domain_error
// for z <= 0 or nu < 0.  Relative accuracy ~1e-12 or better away from
// underflow; exact symmetry K_{-nu} = K_{nu} is irrelevant here because
// negative orders are folded by the caller.
BesselKResult bessel_k_info(double nu, double z);

// Convenience wrapper discarding the underflow flag (the value is still 0
// in that regime).
double bessel_k(double nu, double z);

}  // namespace fracwave
