// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
#include "fracwave/time_stepping.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fracwave/errors.hpp"

namespace fracwave {

TimeGrid make_time_grid(double T, int K) {
  if (!(T > 0.0)) {
    throw std::invalid_argument("make_time_grid: T must be positive");
  }
  if (K < 2) {
    throw std::invalid_argument("make_time_grid: need at least two steps");
  }
  return {T, K, T / K};
}

WaveState make_initial_state(const DtnOperator& op, const TimeGrid& grid,
                             const Eigen::VectorXd& g_proj,
                             const Eigen::VectorXd& h_proj,
                             const Eigen::VectorXd& f0_proj) {
  const int n = op.trace_dim();
  if (g_proj.size() != n || h_proj.size() != n || f0_proj.size() != n) {
    throw std::invalid_argument("make_initial_state: size mismatch");
  }
  WaveState st;
  st.u_prev = g_proj;
  // discrete initial acceleration Z = P f(0) - B^{-1} L U_0
  const Eigen::VectorXd z = f0_proj - op.mass_solve(op.apply(g_proj));
  st.u_curr = g_proj + grid.dt * h_proj + 0.5 * grid.dt * grid.dt * z;
  st.step = 1;
  return st;
}

Eigen::VectorXd backward_difference(const Eigen::VectorXd& u_curr,
                                    const Eigen::VectorXd& u_prev,
                                    double dt) {
  return (u_curr - u_prev) / dt;
}

double mass_norm(const DtnOperator& op, const Eigen::VectorXd& v) {
  return std::sqrt(v.dot(op.base_mass() * v));
}

namespace {

double pair_energy_leapfrog(const DtnOperator& op, double dt,
                            const Eigen::VectorXd& u_prev,
                            const Eigen::VectorXd& u_curr,
                            const Eigen::VectorXd& lu_prev) {
  const Eigen::VectorXd d = backward_difference(u_curr, u_prev, dt);
  return 0.5 * d.dot(op.base_mass() * d) + 0.5 * u_curr.dot(lu_prev);
}

double pair_energy_trapezoidal(const DtnOperator& op, double dt,
                               const Eigen::VectorXd& u_prev,
                               const Eigen::VectorXd& u_curr,
                               const Eigen::VectorXd& lu_prev,
                               const Eigen::VectorXd& lu_curr) {
  const Eigen::VectorXd d = backward_difference(u_curr, u_prev, dt);
  const Eigen::VectorXd mid = 0.5 * (u_curr + u_prev);
  const Eigen::VectorXd lu_mid = 0.5 * (lu_curr + lu_prev);
  return 0.5 * d.dot(op.base_mass() * d) + 0.5 * mid.dot(lu_mid);
}

void require_finite(const Eigen::VectorXd& u, int step) {
  if (!u.allFinite()) {
    throw NumericalError("time integration diverged at step " +
                         std::to_string(step) +
                         " (non-finite values in the iterate)");
  }
}

}  // namespace

double leapfrog_energy(const DtnOperator& op, double dt,
                       const Eigen::VectorXd& u_prev,
                       const Eigen::VectorXd& u_curr) {
  return pair_energy_leapfrog(op, dt, u_prev, u_curr, op.apply(u_prev));
}

double trapezoidal_energy(const DtnOperator& op, double dt,
                          const Eigen::VectorXd& u_prev,
                          const Eigen::VectorXd& u_curr) {
  return pair_energy_trapezoidal(op, dt, u_prev, u_curr, op.apply(u_prev),
                                 op.apply(u_curr));
}

LeapfrogStepper::LeapfrogStepper(const DtnOperator& op, const TimeGrid& grid)
    : op_(op), dt_(grid.dt) {}

void LeapfrogStepper::step(WaveState& state, const Eigen::VectorXd& f_k,
                           const TimeGrid& grid) {
  if (grid.dt != dt_) {
    throw NumericalError(
        "LeapfrogStepper: stepping with a different time grid than the "
        "one supplied at construction");
  }
  if (!have_cache_) {
    cached_lu_prev_ = op_.apply(state.u_prev);
    have_cache_ = true;
  }
  const Eigen::VectorXd lu_curr = op_.apply(state.u_curr);
  last_energy_ = pair_energy_leapfrog(op_, dt_, state.u_prev, state.u_curr,
                                      cached_lu_prev_);
  Eigen::VectorXd u_next = 2.0 * state.u_curr - state.u_prev;
  u_next.noalias() -= dt_ * dt_ * op_.mass_solve(lu_curr);
  u_next.noalias() += dt_ * dt_ * f_k;
  require_finite(u_next, state.step + 1);
  state.u_prev = state.u_curr;
  state.u_curr = u_next;
  state.step += 1;
  cached_lu_prev_ = lu_curr;
}

TrapezoidalStepper::TrapezoidalStepper(const DtnOperator& op,
                                       const TimeGrid& grid)
    : op_(op), dt_(grid.dt) {
  const int my = op.cylinder_dim();
  const double q = 0.25 * dt_ * dt_;
  // pencil (SY, E1 + q TY): both sides SPD (E1 pins the trace hat)
  Eigen::MatrixXd p = q * op.scaled_stiffness_y();
  p(0, 0) += 1.0;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
      op.scaled_mass_y(), p, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (ges.info() != Eigen::Success) {
    throw NumericalError(
        "TrapezoidalStepper: pencil diagonalization failed");
  }
  nu_ = ges.eigenvalues();
  xhat_ = ges.eigenvectors();
  if (nu_.minCoeff() <= 0.0) {
    throw NumericalError(
        "TrapezoidalStepper: nonpositive pencil eigenvalue");
  }
  solvers_.resize(my);
  for (int j = 0; j < my; ++j) {
    Eigen::SparseMatrix<double> shifted = (q * nu_[j]) * op.base_stiffness();
    shifted += op.base_mass();
    solvers_[j] =
        std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
    solvers_[j]->compute(shifted);
    if (solvers_[j]->info() != Eigen::Success) {
      throw NumericalError("TrapezoidalStepper: mode factorization failed");
    }
  }
}

void TrapezoidalStepper::step(WaveState& state, const Eigen::VectorXd& f_avg_k,
                              const TimeGrid& grid) {
  if (grid.dt != dt_) {
    throw NumericalError(
        "TrapezoidalStepper: factorizations were built for dt = " +
        std::to_string(dt_) + " but the step uses dt = " +
        std::to_string(grid.dt) + "; rebuild the stepper");
  }
  if (!have_cache_) {
    cached_lu_prev_ = op_.apply(state.u_prev);
    have_cache_ = true;
  }
  const Eigen::VectorXd lu_curr = op_.apply(state.u_curr);
  last_energy_ = pair_energy_trapezoidal(op_, dt_, state.u_prev, state.u_curr,
                                         cached_lu_prev_, lu_curr);

  const double q = 0.25 * dt_ * dt_;
  Eigen::VectorXd rhs =
      op_.base_mass() * (2.0 * state.u_curr - state.u_prev);
  rhs.noalias() -= q * (2.0 * lu_curr + cached_lu_prev_);
  rhs.noalias() += (dt_ * dt_) * (op_.base_mass() * f_avg_k);

  // Coupled cylinder solve: only the trace block of the right-hand side
  // is nonzero, so mode j sees xhat(0,j) * rhs.
  const int my = op_.cylinder_dim();
  last_what_.resize(rhs.size(), my);
  parallel_for_modes(my, op_.threads(), [&](int j) {
    last_what_.col(j) = solvers_[j]->solve(xhat_(0, j) * rhs);
  });
  Eigen::VectorXd u_next = Eigen::VectorXd::Zero(rhs.size());
  for (int j = 0; j < my; ++j) {
    u_next.noalias() += xhat_(0, j) * last_what_.col(j);
  }
  require_finite(u_next, state.step + 1);
  state.u_prev = state.u_curr;
  state.u_curr = u_next;
  state.step += 1;
  cached_lu_prev_ = lu_curr;
}

CflReport check_cfl(const DtnOperator& op, double dt, double theta) {
  CflReport rep;
  rep.theta = theta;
  try {
    rep.lambda_max = op.spectral_bound();
    rep.margin = 1.0 - 0.5 * dt * dt * rep.lambda_max;
    rep.max_admissible_dt = std::sqrt(2.0 * (1.0 - theta) / rep.lambda_max);
    rep.pass = rep.margin >= theta;
  } catch (const std::exception&) {
    rep.lambda_max = std::numeric_limits<double>::quiet_NaN();
    rep.margin = std::numeric_limits<double>::quiet_NaN();
    rep.max_admissible_dt = std::numeric_limits<double>::quiet_NaN();
    rep.pass = false;
  }
  return rep;
}

}  // namespace fracwave
