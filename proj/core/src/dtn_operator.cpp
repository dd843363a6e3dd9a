// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
#include "fracwave/dtn_operator.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "fracwave/errors.hpp"

namespace fracwave {

void parallel_for_modes(int count, int threads,
                        const std::function<void(int)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (int j = 0; j < count; ++j) fn(j);
    return;
  }
  const int workers = std::min(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int j = w; j < count; j += workers) fn(j);
    });
  }
  for (std::thread& t : pool) t.join();
}

DtnOperator::DtnOperator(const HpSpaceY& hp, const OmegaMatrices& om,
                         const FractionalOrder& frac)
    : frac_(frac),
      cylinder_dim_(hp.dim),
      base_stiffness_(om.stiffness),
      base_mass_(om.mass) {
  if (hp.dim < 1) {
    throw std::invalid_argument("DtnOperator: empty y-direction space");
  }
  // Scale by 1/d_s so the Schur complement carries the correctly
  // normalized fractional Laplacian (the raw Gram matrices deliberately
  // do not include this factor).
  sy_ = hp.mass / frac.ds;
  ty_ = hp.stiffness / frac.ds;
  sy_00_ = sy_(0, 0);
  ty_00_ = ty_(0, 0);

  const int rest = cylinder_dim_ - 1;
  sy_red_ = sy_.bottomRightCorner(rest, rest);
  ty_red_ = ty_.bottomRightCorner(rest, rest);
  sy_col_ = sy_.col(0).tail(rest);
  ty_col_ = ty_.col(0).tail(rest);

  if (rest > 0) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
        sy_red_, ty_red_, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (ges.info() != Eigen::Success) {
      throw NumericalError(
          "DtnOperator: generalized eigensolve of the y-direction pencil "
          "failed");
    }
    mu_ = ges.eigenvalues();
    X_ = ges.eigenvectors();
    if (mu_.minCoeff() <= 0.0) {
      throw NumericalError(
          "DtnOperator: nonpositive pencil eigenvalue; the y-direction "
          "matrices are not positive definite");
    }
    coeff_a_ = X_.transpose() * sy_col_;
    coeff_b_ = X_.transpose() * ty_col_;
  } else {
    mu_.resize(0);
    X_.resize(0, 0);
    coeff_a_.resize(0);
    coeff_b_.resize(0);
  }

  mode_solvers_.resize(mu_.size());
  for (int j = 0; j < mu_.size(); ++j) {
    Eigen::SparseMatrix<double> shifted = mu_[j] * base_stiffness_;
    shifted += base_mass_;
    mode_solvers_[j] =
        std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
    mode_solvers_[j]->compute(shifted);
    if (mode_solvers_[j]->info() != Eigen::Success) {
      throw NumericalError("DtnOperator: per-mode factorization failed");
    }
  }
  mass_solver_.compute(base_mass_);
  if (mass_solver_.info() != Eigen::Success) {
    throw NumericalError("DtnOperator: base mass factorization failed");
  }
}

void DtnOperator::set_threads(int threads) {
  threads_ = std::max(1, threads);
}

Eigen::VectorXd DtnOperator::mass_solve(const Eigen::VectorXd& rhs) const {
  return mass_solver_.solve(rhs);
}

Eigen::MatrixXd DtnOperator::solve_interior(const Eigen::VectorXd& U) const {
  const int nmodes = num_modes();
  Eigen::MatrixXd vhat(trace_dim(), nmodes);
  if (nmodes == 0) return vhat;
  const Eigen::VectorXd au = base_stiffness_ * U;
  const Eigen::VectorXd bu = base_mass_ * U;
  parallel_for_modes(nmodes, threads_, [&](int j) {
    // minus sign: the coupling to the fixed trace moves to the
    // right-hand side of the interior equations
    const Eigen::VectorXd rhs = -(coeff_a_[j] * au + coeff_b_[j] * bu);
    vhat.col(j) = mode_solvers_[j]->solve(rhs);
  });
  return vhat;
}

Eigen::MatrixXd DtnOperator::modal_to_physical(
    const Eigen::MatrixXd& vhat) const {
  return vhat * X_.transpose();
}

Eigen::MatrixXd DtnOperator::harmonic_extension(
    const Eigen::VectorXd& U) const {
  Eigen::MatrixXd W(trace_dim(), cylinder_dim_);
  W.col(0) = U;
  if (cylinder_dim_ > 1) {
    W.rightCols(cylinder_dim_ - 1) = modal_to_physical(solve_interior(U));
  }
  return W;
}

Eigen::VectorXd DtnOperator::apply(const Eigen::VectorXd& U) const {
  if (U.size() != trace_dim()) {
    throw std::invalid_argument("DtnOperator::apply: size mismatch");
  }
  const Eigen::MatrixXd vhat = solve_interior(U);
  Eigen::VectorXd lu = sy_00_ * (base_stiffness_ * U);
  lu += ty_00_ * (base_mass_ * U);
  for (int j = 0; j < num_modes(); ++j) {
    lu += coeff_a_[j] * (base_stiffness_ * vhat.col(j));
    lu += coeff_b_[j] * (base_mass_ * vhat.col(j));
  }
  return lu;
}

DtnOperator::ApplyResult DtnOperator::apply_with_representative(
    const Eigen::VectorXd& U) const {
  ApplyResult res;
  res.lu = apply(U);
  res.eta = mass_solver_.solve(res.lu);
  return res;
}

double DtnOperator::cylinder_energy_product(const Eigen::MatrixXd& W1,
                                            const Eigen::MatrixXd& W2) const {
  if (W1.rows() != trace_dim() || W1.cols() != cylinder_dim_ ||
      W2.rows() != trace_dim() || W2.cols() != cylinder_dim_) {
    throw std::invalid_argument(
        "cylinder_energy_product: coefficient table size mismatch");
  }
  // E = sum_{k,k'} SY(k,k') W1_k' A W2_k' + TY(k,k') W1_k' B W2_k'
  const Eigen::MatrixXd aw = base_stiffness_ * W2;
  const Eigen::MatrixXd bw = base_mass_ * W2;
  double acc = 0.0;
  for (int k = 0; k < cylinder_dim_; ++k) {
    for (int kp = 0; kp < cylinder_dim_; ++kp) {
      acc += sy_(k, kp) * W1.col(k).dot(aw.col(kp));
      acc += ty_(k, kp) * W1.col(k).dot(bw.col(kp));
    }
  }
  return acc;
}

double DtnOperator::spectral_bound(double rel_tol, int max_iters,
                                   unsigned seed) const {
  if (cached_bound_ > 0.0) return cached_bound_;
  const int n = trace_dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z[i] = dist(rng);

  double rho_prev = 0.0;
  double rho = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::VectorXd lz = apply(z);
    const double num = z.dot(lz);
    const double den = z.dot(base_mass_ * z);
    rho = num / den;
    if (it > 0 && std::abs(rho - rho_prev) <= rel_tol * std::abs(rho)) {
      break;
    }
    rho_prev = rho;
    Eigen::VectorXd next = mass_solver_.solve(lz);
    const double nrm = std::sqrt(next.dot(base_mass_ * next));
    if (!(nrm > 0.0) || !std::isfinite(nrm)) {
      throw NumericalError("spectral_bound: power iteration degenerated");
    }
    z = next / nrm;
  }
  cached_bound_ = rho;
  return cached_bound_;
}

}  // namespace fracwave
