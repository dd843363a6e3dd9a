// Part of fracwave, released under the MIT license; see LICENSE at the
// repository root.
//
// Discrete Dirichlet-to-Neumann realization of the fractional Laplacian.
// The extended problem on the cylinder domain x (0,Y) is discretized by
// the tensor product of the base P1 space (matrices A = stiffness,
// B = mass) with the graded hp space in y (weighted matrices
// mass_Y / stiffness_Y, scaled here by 1/d_s so that the quadratic form
// of the operator matches the normalized cylinder energy).  Ordering the
// y degrees of freedom with the trace hat first, the cylinder energy of
// W = (U; w_1 ... w_{rest}) is
//
//   E(W) = sum_{k,k'} SY(k,k') w_k' A w_k  +  TY(k,k') w_k' B w_k,
//   SY = mass_Y / d_s,   TY = stiffness_Y / d_s,
//
// and eliminating the interior columns at fixed trace U gives the Schur
// complement L, the discrete fractional Laplacian:  U' L U = min E.
// The interior solve is block-diagonalized by the generalized eigenpairs
// of the reduced pencil (SY~, TY~):
//
//   X' TY~ X = I,  X' SY~ X = diag(mu),   mu_j > 0,
//
// after which each mode needs one solve with (mu_j A + B):
//
//   (mu_j A + B) vhat_j = -((X' sy~)_j A + (X' ty~)_j B) U,
//
// (sy~, ty~ are the coupling columns between the trace row and the
// interior block; the leading minus sign comes from moving the coupling
// terms to the right-hand side) and
//
//   L U = (sy_00 A + ty_00 B) U + sum_j (X' sy~)_j A vhat_j
//                                + (X' ty~)_j B vhat_j.
#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "fracwave/extended_mesh.hpp"
#include "fracwave/fractional.hpp"
#include "fracwave/omega_fem.hpp"

namespace fracwave {

class DtnOperator {
 public:
  // hp: weighted matrices of the y-direction space (unscaled, as
  // assembled); om: base-domain P1 matrices.  Copies of everything
  // needed are kept, so the inputs may be discarded afterwards.
  DtnOperator(const HpSpaceY& hp, const OmegaMatrices& om,
              const FractionalOrder& frac);

  int trace_dim() const { return static_cast<int>(base_mass_.rows()); }
  int cylinder_dim() const { return cylinder_dim_; }  // y-dofs incl. trace
  int num_modes() const { return static_cast<int>(mu_.size()); }
  const FractionalOrder& fractional() const { return frac_; }

  // --- scaled (1/d_s) cylinder matrices and their pencil data ---
  const Eigen::MatrixXd& scaled_mass_y() const { return sy_; }
  const Eigen::MatrixXd& scaled_stiffness_y() const { return ty_; }
  const Eigen::MatrixXd& reduced_mass_y() const { return sy_red_; }
  const Eigen::MatrixXd& reduced_stiffness_y() const { return ty_red_; }
  const Eigen::VectorXd& coupling_mass_y() const { return sy_col_; }
  const Eigen::VectorXd& coupling_stiffness_y() const { return ty_col_; }
  double trace_mass_y() const { return sy_00_; }
  double trace_stiffness_y() const { return ty_00_; }
  const Eigen::MatrixXd& eigenvectors() const { return X_; }
  const Eigen::VectorXd& eigenvalues() const { return mu_; }

  const Eigen::SparseMatrix<double>& base_stiffness() const {
    return base_stiffness_;
  }
  const Eigen::SparseMatrix<double>& base_mass() const { return base_mass_; }

  // Solve with the base mass matrix (used by the explicit scheme and the
  // initial acceleration).
  Eigen::VectorXd mass_solve(const Eigen::VectorXd& rhs) const;

  // Interior modal coefficients vhat of the discrete harmonic extension
  // of trace U: column j solves (mu_j A + B) vhat_j = rhs_j as above.
  // Dimensions: trace_dim x num_modes.
  Eigen::MatrixXd solve_interior(const Eigen::VectorXd& U) const;

  // Physical interior columns w_k = sum_j X(k,j) vhat_j (k = 1..rest),
  // from the modal ones.
  Eigen::MatrixXd modal_to_physical(const Eigen::MatrixXd& vhat) const;

  // Full cylinder coefficient table of the discrete harmonic extension:
  // trace_dim x cylinder_dim, column 0 = U.
  Eigen::MatrixXd harmonic_extension(const Eigen::VectorXd& U) const;

  // L U (the image under the discrete fractional Laplacian).
  Eigen::VectorXd apply(const Eigen::VectorXd& U) const;

  struct ApplyResult {
    Eigen::VectorXd lu;   // L U
    Eigen::VectorXd eta;  // mass_solve(L U): nodal representative of L U
  };
  ApplyResult apply_with_representative(const Eigen::VectorXd& U) const;

  // Cylinder energy product E(W1, W2) of two coefficient tables
  // (trace_dim x cylinder_dim).  E(H U, H U) equals U' L U; used by the
  // consistency tests.
  double cylinder_energy_product(const Eigen::MatrixXd& W1,
                                 const Eigen::MatrixXd& W2) const;

  // Largest generalized eigenvalue estimate of (L, B) by B-orthogonal
  // power iteration with a deterministic seeded start; stops when two
  // consecutive Rayleigh quotients agree to rel_tol or after max_iters.
  // The result is cached (subsequent calls are free).
  double spectral_bound(double rel_tol = 1e-6, int max_iters = 1000,
                        unsigned seed = 20260214) const;

  // Number of worker threads for the per-mode solve loop (>= 1).
  void set_threads(int threads);
  int threads() const { return threads_; }

 private:
  FractionalOrder frac_;
  int cylinder_dim_ = 0;
  Eigen::MatrixXd sy_, ty_;          // scaled full cylinder matrices
  Eigen::MatrixXd sy_red_, ty_red_;  // interior blocks
  Eigen::VectorXd sy_col_, ty_col_;  // coupling columns (interior, trace)
  double sy_00_ = 0.0, ty_00_ = 0.0;
  Eigen::MatrixXd X_;
  Eigen::VectorXd mu_;
  Eigen::VectorXd coeff_a_;  // X' sy_col: pairs with base stiffness
  Eigen::VectorXd coeff_b_;  // X' ty_col: pairs with base mass
  Eigen::SparseMatrix<double> base_stiffness_, base_mass_;
  std::vector<std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>>
      mode_solvers_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> mass_solver_;
  int threads_ = 1;
  mutable double cached_bound_ = -1.0;
};

// Run fn(j) for j in [0, count) on the operator's thread budget; the
// work items must write to disjoint state.
void parallel_for_modes(int count, int threads,
                        const std::function<void(int)>& fn);

}  // namespace fracwave
