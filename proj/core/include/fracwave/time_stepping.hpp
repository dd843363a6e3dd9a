// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
//
// Second-order two-step time integrators for
//
//   B u'' + L u = B f,    u(0) = g,  u'(0) = h,
//
// with B the base mass matrix and L the discrete fractional Laplacian.
// Both schemes start from U_0 = P g and the Taylor step
// U_1 = U_0 + dt P h + (dt^2/2) (P f(0) - B^{-1} L U_0).
//
// Explicit (leapfrog):
//   B U_{k+1} = B (2U_k - U_{k-1}) - dt^2 L U_k + dt^2 B f_k,
// conditionally stable, discrete energy
//   E_k = 1/2 |d U_k|_B^2 + 1/2 U_k' L U_{k-1},
// (d the backward difference) conserved exactly when f = 0 and
// nonnegative under the step restriction dt^2 lambda_max <= 4.
//
// Implicit (trapezoidal):
//   (B + dt^2/4 L) U_{k+1} = B (2U_k - U_{k-1})
//       - dt^2/4 L (2U_k + U_{k-1}) + dt^2 B fbar_k,
//   fbar_k = (f_{k+1} + 2 f_k + f_{k-1}) / 4,
// unconditionally stable, discrete energy
//   E_k = 1/2 |d U_k|_B^2 + 1/2 U_{k-1/2}' L U_{k-1/2}
// conserved when f = 0.  Each implicit step is solved through the
// coupled cylinder system: the pencil (SY, E1 + dt^2/4 TY) of the full
// y-direction matrices is diagonalized once per (mesh, dt), after which
// a step costs one base solve per y-mode.  The factorizations are bound
// to the dt they were built for; stepping with a different grid raises
// an error instead of silently producing garbage.
#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "fracwave/dtn_operator.hpp"

namespace fracwave {

struct TimeGrid {
  double T = 1.0;  // final time
  int K = 2;       // number of steps
  double dt = 0.5; // T / K
};

// Validates T > 0, K >= 2.
TimeGrid make_time_grid(double T, int K);

// Two-level state: after step k the fields hold U_{k-1} and U_k.
struct WaveState {
  Eigen::VectorXd u_prev;
  Eigen::VectorXd u_curr;
  int step = 1;  // index of u_curr
};

// U_0 = g_proj, U_1 by the second-order Taylor start; all inputs are
// coefficient vectors on the interior P1 space (projections of g, h,
// f(0)).
WaveState make_initial_state(const DtnOperator& op, const TimeGrid& grid,
                             const Eigen::VectorXd& g_proj,
                             const Eigen::VectorXd& h_proj,
                             const Eigen::VectorXd& f0_proj);

// (u_curr - u_prev) / dt
Eigen::VectorXd backward_difference(const Eigen::VectorXd& u_curr,
                                    const Eigen::VectorXd& u_prev, double dt);

// sqrt(v' B v)
double mass_norm(const DtnOperator& op, const Eigen::VectorXd& v);

// Discrete energies of a state pair (one operator application each).
double leapfrog_energy(const DtnOperator& op, double dt,
                       const Eigen::VectorXd& u_prev,
                       const Eigen::VectorXd& u_curr);
double trapezoidal_energy(const DtnOperator& op, double dt,
                          const Eigen::VectorXd& u_prev,
                          const Eigen::VectorXd& u_curr);

class LeapfrogStepper {
 public:
  LeapfrogStepper(const DtnOperator& op, const TimeGrid& grid);

  // Advances the state by one step; f_k are the projected forcing
  // coefficients at time t_k = k dt (k = state.step).  grid must be the
  // one the stepper was built with.
  void step(WaveState& state, const Eigen::VectorXd& f_k,
            const TimeGrid& grid);

  // Energy E_k of the pair the last step consumed, from cached operator
  // products (no extra applications).
  double last_input_energy() const { return last_energy_; }

 private:
  const DtnOperator& op_;
  double dt_;
  Eigen::VectorXd cached_lu_prev_;
  bool have_cache_ = false;
  double last_energy_ = 0.0;
};

class TrapezoidalStepper {
 public:
  TrapezoidalStepper(const DtnOperator& op, const TimeGrid& grid);

  // f_avg_k = (f_{k+1} + 2 f_k + f_{k-1})/4 at k = state.step.  Throws
  // NumericalError when grid.dt differs from the dt the factorizations
  // were built for.
  void step(WaveState& state, const Eigen::VectorXd& f_avg_k,
            const TimeGrid& grid);

  double last_input_energy() const { return last_energy_; }

  // Modal coefficients what of the most recent coupled solve
  // (trace_dim x cylinder_dim); diagnostic access to the interior of the
  // implicit step.
  const Eigen::MatrixXd& last_modal_solution() const { return last_what_; }
  const Eigen::MatrixXd& pencil_eigenvectors() const { return xhat_; }
  const Eigen::VectorXd& pencil_eigenvalues() const { return nu_; }

 private:
  const DtnOperator& op_;
  double dt_;
  Eigen::MatrixXd xhat_;  // pencil eigenvectors, trace row first
  Eigen::VectorXd nu_;
  std::vector<std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>>
      solvers_;
  Eigen::VectorXd cached_lu_prev_;
  bool have_cache_ = false;
  double last_energy_ = 0.0;
  Eigen::MatrixXd last_what_;
};

struct CflReport {
  bool pass = false;
  double theta = 0.5;
  double lambda_max = 0.0;       // spectral bound estimate used
  double margin = 0.0;           // 1 - dt^2 lambda_max / 2
  double max_admissible_dt = 0.0;  // sqrt(2 (1-theta) / lambda_max)
};

// Energy-law step restriction check, margin = 1 - dt^2 lambda_max / 2
// >= theta.  Never throws; on an internal failure pass = false and
// lambda_max = NaN.  Note the classical stability threshold is the
// weaker dt^2 lambda_max <= 4; callers enforcing hard stability should
// test that, while this check guards the energy bound with safety
// factor theta.
CflReport check_cfl(const DtnOperator& op, double dt, double theta = 0.5);

}  // namespace fracwave
