// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
//
// Time integrators against scalar recurrences and dense solves: the
// Taylor start, the leapfrog three-term recurrence along an exact
// discrete eigenvector, one trapezoidal step against a dense coupled
// solve, conservation, energy formula identities, the CFL report, and
// stale-grid/divergence guards.
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "fracwave/dtn_operator.hpp"
#include "fracwave/errors.hpp"
#include "fracwave/extended_mesh.hpp"
#include "fracwave/omega_fem.hpp"
#include "fracwave/time_stepping.hpp"
#include "oracle_helpers.hpp"

using fracwave::assemble_omega;
using fracwave::assemble_weighted_matrices;
using fracwave::backward_difference;
using fracwave::build_degree_vector;
using fracwave::build_geometric_mesh;
using fracwave::check_cfl;
using fracwave::Domain;
using fracwave::DtnOperator;
using fracwave::LeapfrogStepper;
using fracwave::leapfrog_energy;
using fracwave::make_fractional_order;
using fracwave::make_initial_state;
using fracwave::make_time_grid;
using fracwave::mass_norm;
using fracwave::NumericalError;
using fracwave::OmegaMatrices;
using fracwave::OmegaMesh;
using fracwave::TimeGrid;
using fracwave::TrapezoidalStepper;
using fracwave::trapezoidal_energy;
using fracwave::WaveState;

namespace {

struct Setup {
  OmegaMesh mesh;
  OmegaMatrices mats;
  DtnOperator op;

  Setup(Domain domain, int n, double s, double Y, int M, double sigma,
        double slope)
      : mesh(domain, n),
        mats(assemble_omega(mesh)),
        op(assemble_weighted_matrices(build_geometric_mesh(Y, M, sigma),
                                      build_degree_vector(M, slope),
                                      1.0 - 2.0 * s),
           mats, make_fractional_order(s)) {}
};

Eigen::VectorXd seeded_vector(int size, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) v[i] = unif(rng);
  return v;
}

// Smallest generalized eigenpair of (L, B), dense.
void smallest_eigenpair(const DtnOperator& op, double& lambda,
                        Eigen::VectorXd& vec) {
  const int n = op.trace_dim();
  Eigen::MatrixXd L(n, n);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[j] = 1.0;
    L.col(j) = op.apply(e);
  }
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
      0.5 * (L + L.transpose()), Eigen::MatrixXd(op.base_mass()));
  lambda = ges.eigenvalues()[0];
  vec = ges.eigenvectors().col(0);
}
}  // namespace

TEST_SUITE("time_stepping") {

TEST_CASE("time grid validation and arithmetic") {
  const TimeGrid grid = make_time_grid(2.0, 8);
  CHECK(grid.dt == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(grid.K == 8);
  CHECK_THROWS_AS(make_time_grid(0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_time_grid(-1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_time_grid(1.0, 1), std::invalid_argument);
}

TEST_CASE("initial state implements the second-order Taylor start") {
  const Setup su(Domain::interval, 8, 0.5, 2.0, 4, 0.5, 1.0);
  const DtnOperator& op = su.op;
  const TimeGrid grid = make_time_grid(1.0, 20);
  const Eigen::VectorXd g = seeded_vector(op.trace_dim(), 11);
  const Eigen::VectorXd h = seeded_vector(op.trace_dim(), 12);
  const Eigen::VectorXd f0 = seeded_vector(op.trace_dim(), 13);
  const WaveState st = make_initial_state(op, grid, g, h, f0);
  CHECK(st.step == 1);
  CHECK((st.u_prev - g).cwiseAbs().maxCoeff() < 1e-15);
  const Eigen::VectorXd accel = f0 - op.mass_solve(op.apply(g));
  const Eigen::VectorXd want =
      g + grid.dt * h + 0.5 * grid.dt * grid.dt * accel;
  CHECK((st.u_curr - want).cwiseAbs().maxCoeff() < 1e-13);
  CHECK_THROWS_AS(
      make_initial_state(op, grid, g, h.head(3), f0),
      std::invalid_argument);
}

TEST_CASE("leapfrog follows the scalar three-term recurrence exactly") {
  // Along an exact discrete eigenvector the scheme reduces to
  // c_{k+1} = (2 - dt^2 lam) c_k - c_{k-1}; machine agreement required.
  const Setup su(Domain::interval, 8, 0.5, 2.0, 5, 0.5, 1.0);
  const DtnOperator& op = su.op;
  double lam = 0.0;
  Eigen::VectorXd v;
  smallest_eigenpair(op, lam, v);
  const TimeGrid grid = make_time_grid(2.0, 100);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(op.trace_dim());
  WaveState st = make_initial_state(op, grid, v, zero, zero);
  LeapfrogStepper stepper(op, grid);
  // Scalar shadow of the same recurrence, including the Taylor start.
  double c_prev = 1.0;
  double c_curr = 1.0 - 0.5 * grid.dt * grid.dt * lam;
  for (int k = 1; k < grid.K; ++k) {
    stepper.step(st, zero, grid);
    const double c_next = (2.0 - grid.dt * grid.dt * lam) * c_curr - c_prev;
    c_prev = c_curr;
    c_curr = c_next;
    if (k % 25 == 0 || k == grid.K - 1) {
      CAPTURE(k);
      CHECK((st.u_curr - c_curr * v).cwiseAbs().maxCoeff() <
            1e-10 * std::max(0.1, std::abs(c_curr)));
    }
  }
}

TEST_CASE("one trapezoidal step equals the dense coupled solve") {
  const Setup su(Domain::interval, 10, 0.3, 2.0, 5, 0.5, 1.0);
  const DtnOperator& op = su.op;
  const TimeGrid grid = make_time_grid(1.0, 10);
  const double dt = grid.dt;
  const Eigen::VectorXd g = seeded_vector(op.trace_dim(), 21);
  const Eigen::VectorXd h = seeded_vector(op.trace_dim(), 22);
  const Eigen::VectorXd fbar = seeded_vector(op.trace_dim(), 23);
  WaveState st = make_initial_state(op, grid, g, h, Eigen::VectorXd::Zero(op.trace_dim()));
  const Eigen::VectorXd u_prev = st.u_prev;
  const Eigen::VectorXd u_curr = st.u_curr;

  TrapezoidalStepper stepper(op, grid);
  stepper.step(st, fbar, grid);

  // Dense route: rhs exactly as the scheme defines it, with L applied
  // through the dense Schur oracle, then one dense coupled solve.
  const Eigen::MatrixXd B = Eigen::MatrixXd(op.base_mass());
  const Eigen::VectorXd rhs =
      B * (2.0 * u_curr - u_prev) -
      0.25 * dt * dt *
          fracwave_test::dense_dtn_apply(op, 2.0 * u_curr + u_prev) +
      dt * dt * B * fbar;
  const Eigen::VectorXd dense =
      fracwave_test::dense_trapezoidal_solve(op, dt, rhs);
  CHECK((st.u_curr - dense).norm() / dense.norm() < 1e-9);
  CHECK(st.step == 2);
  CHECK((st.u_prev - u_curr).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("stepping with a foreign grid is refused") {
  const Setup su(Domain::interval, 8, 0.5, 2.0, 4, 0.5, 1.0);
  const DtnOperator& op = su.op;
  const TimeGrid grid = make_time_grid(1.0, 10);
  const TimeGrid other = make_time_grid(1.0, 20);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(op.trace_dim());
  WaveState st = make_initial_state(op, grid, seeded_vector(op.trace_dim(), 31),
                                    zero, zero);
  TrapezoidalStepper trap(op, grid);
  CHECK_THROWS_AS(trap.step(st, zero, other), NumericalError);
  LeapfrogStepper leap(op, grid);
  CHECK_THROWS_AS(leap.step(st, zero, other), NumericalError);
}

TEST_CASE("both schemes conserve their discrete energies without forcing") {
  const Setup su(Domain::interval, 16, 0.7, 2.0, 6, 0.5, 1.0);
  const DtnOperator& op = su.op;
  const Eigen::VectorXd g = seeded_vector(op.trace_dim(), 41);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(op.trace_dim());

  // Leapfrog under a safe step.
  const double bound = op.spectral_bound();
  const double dt_safe = 0.5 * 2.0 / std::sqrt(bound);
  const int K = 200;
  const TimeGrid lgrid = make_time_grid(K * dt_safe, K);
  WaveState st = make_initial_state(op, lgrid, g, zero, zero);
  LeapfrogStepper leap(op, lgrid);
  double e_first = 0.0, min_e = 1e300, max_dev = 0.0;
  for (int k = 1; k < K; ++k) {
    leap.step(st, zero, lgrid);
    const double e = leap.last_input_energy();
    if (k == 1) e_first = e;
    min_e = std::min(min_e, e);
    max_dev = std::max(max_dev, std::abs(e - e_first));
  }
  CHECK(max_dev / std::abs(e_first) < 1e-12);
  CHECK(min_e > 0.0);

  // Trapezoidal with a comfortable step (unconditional stability).
  const TimeGrid tgrid = make_time_grid(4.0, 40);
  WaveState st2 = make_initial_state(op, tgrid, g, zero, zero);
  TrapezoidalStepper trap(op, tgrid);
  double e2_first = 0.0, max_dev2 = 0.0;
  for (int k = 1; k < 40; ++k) {
    trap.step(st2, zero, tgrid);
    const double e = trap.last_input_energy();
    if (k == 1) e2_first = e;
    max_dev2 = std::max(max_dev2, std::abs(e - e2_first));
  }
  CHECK(max_dev2 / std::abs(e2_first) < 1e-12);
}

TEST_CASE("cached step energies equal the standalone energy functions") {
  const Setup su(Domain::interval, 12, 0.45, 2.0, 5, 0.5, 1.0);
  const DtnOperator& op = su.op;
  const TimeGrid grid = make_time_grid(1.0, 25);
  const Eigen::VectorXd g = seeded_vector(op.trace_dim(), 51);
  const Eigen::VectorXd h = seeded_vector(op.trace_dim(), 52);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(op.trace_dim());

  WaveState st = make_initial_state(op, grid, g, h, zero);
  LeapfrogStepper leap(op, grid);
  Eigen::VectorXd u_prev = st.u_prev, u_curr = st.u_curr;
  leap.step(st, zero, grid);
  CHECK(leap.last_input_energy() ==
        doctest::Approx(leapfrog_energy(op, grid.dt, u_prev, u_curr))
            .epsilon(1e-12));

  WaveState st2 = make_initial_state(op, grid, g, h, zero);
  TrapezoidalStepper trap(op, grid);
  u_prev = st2.u_prev;
  u_curr = st2.u_curr;
  trap.step(st2, zero, grid);
  CHECK(trap.last_input_energy() ==
        doctest::Approx(trapezoidal_energy(op, grid.dt, u_prev, u_curr))
            .epsilon(1e-12));
}

TEST_CASE("energy formulas match their definitions term by term") {
  const Setup su(Domain::interval, 10, 0.55, 2.0, 4, 0.5, 1.0);
  const DtnOperator& op = su.op;
  const double dt = 0.05;
  const Eigen::VectorXd a = seeded_vector(op.trace_dim(), 61);
  const Eigen::VectorXd b = seeded_vector(op.trace_dim(), 62);
  const Eigen::MatrixXd B = Eigen::MatrixXd(op.base_mass());
  const Eigen::VectorXd d = (b - a) / dt;

  const double lf_want = 0.5 * d.dot(B * d) + 0.5 * b.dot(op.apply(a));
  CHECK(leapfrog_energy(op, dt, a, b) ==
        doctest::Approx(lf_want).epsilon(1e-12));

  const Eigen::VectorXd mid = 0.5 * (a + b);
  const double tr_want = 0.5 * d.dot(B * d) + 0.5 * mid.dot(op.apply(mid));
  CHECK(trapezoidal_energy(op, dt, a, b) ==
        doctest::Approx(tr_want).epsilon(1e-12));

  CHECK(mass_norm(op, d) ==
        doctest::Approx(std::sqrt(d.dot(B * d))).epsilon(1e-13));
  CHECK((backward_difference(b, a, dt) - d).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("cfl report reproduces the margin formulas") {
  const Setup su(Domain::interval, 16, 0.5, 2.0, 6, 0.5, 1.0);
  const DtnOperator& op = su.op;
  const double bound = op.spectral_bound();
  const double dt = 0.3 / std::sqrt(bound);
  const auto report = check_cfl(op, dt, 0.5);
  CHECK(report.lambda_max == doctest::Approx(bound).epsilon(1e-12));
  CHECK(report.margin ==
        doctest::Approx(1.0 - dt * dt * bound / 2.0).epsilon(1e-12));
  CHECK(report.max_admissible_dt ==
        doctest::Approx(std::sqrt(2.0 * 0.5 / bound)).epsilon(1e-12));
  CHECK(report.theta == 0.5);
  CHECK(report.pass);
  // A step past the energy margin fails the check even while still
  // classically stable.
  const double dt_big = 1.5 / std::sqrt(bound);
  const auto report2 = check_cfl(op, dt_big, 0.5);
  CHECK_FALSE(report2.pass);
}

TEST_CASE("an unstable leapfrog run grows and trips the finite guard") {
  const Setup su(Domain::interval, 12, 0.5, 2.0, 5, 0.5, 1.0);
  const DtnOperator& op = su.op;
  const double bound = op.spectral_bound();
  const double dt = 1.05 * 2.0 / std::sqrt(bound);
  const int K = 2000;
  const TimeGrid grid = make_time_grid(K * dt, K);
  const Eigen::VectorXd g = seeded_vector(op.trace_dim(), 71);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(op.trace_dim());
  WaveState st = make_initial_state(op, grid, g, zero, zero);
  LeapfrogStepper stepper(op, grid);
  const double base = mass_norm(op, st.u_curr);
  double amplification = 0.0;
  bool threw = false;
  for (int k = 1; k < K; ++k) {
    try {
      stepper.step(st, zero, grid);
    } catch (const NumericalError&) {
      threw = true;  // overflow tripped the non-finite guard: divergence
      break;
    }
    amplification = std::max(amplification, mass_norm(op, st.u_curr) / base);
    if (amplification > 1e6) break;
  }
  CHECK((threw || amplification > 1e6));
}

}  // TEST_SUITE
