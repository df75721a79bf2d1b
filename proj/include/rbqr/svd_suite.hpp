#ifndef RBQR_SVD_SUITE_HPP
#define RBQR_SVD_SUITE_HPP

#include "rbqr/snapshot_matrix.hpp"
#include "rbqr/types.hpp"

namespace rbqr {

/// Thin SVD A = V diag(sigma) W^H with p = min(N, M).
struct SvdResult {
  Matrix v;          // N x p, orthonormal columns
  RealVector sigma;  // p, non-increasing, >= 0
  Matrix w;          // M x p, orthonormal columns
};

/// Throws NumericalError on convergence failure or a non-finite input.
SvdResult svd(const Matrix& a);
RealVector singular_values(const Matrix& a);

/// ||A||_2 = sigma_max(A); zero for an empty matrix.
double two_norm(const Matrix& a);

/// Number of singular values above 100 * eps * sigma_1.
Index numerical_rank(const RealVector& sigma);

//
// POD
//

struct PodResult {
  Matrix basis;      // N x k, leading left singular vectors
  RealVector sigma;  // full singular spectrum of S
  Index k = 0;
  bool tolerance_reached = true;  // false when every sigma >= tau and the full rank is returned
};

/// Smallest k with sigma_{k+1} < tau.
PodResult pod_basis(const SnapshotMatrix& s, double tau);

//
// optimal RRQR
//

/// Q_k = V_k * Qc where Qc Rc = Sigma_k W_k^H is a QR factorization. Gives
/// ||S - Q_k Q_k^H S||_2 = sigma_{k+1}. Throws NumericalError if k exceeds
/// the numerical rank of S, InputError if k < 1.
Matrix optimal_rrqr(const SnapshotMatrix& s, Index k);

//
// reconstruction
//

struct ReconstructionResult {
  Matrix basis;             // X_k = Q_j * Vr(:, 0:k)
  Index j = 0;              // QR depth (every selected pivot had residual >= tau1)
  Index k = 0;              // retained dimension
  RealVector sigma_r;       // singular values of R(0:j, :) (= those of S_1 = Q_j R(0:j,:))
  Matrix qr_basis;          // Q_j from the partial pivoted QR
  Matrix r_left;            // j x j left singular vectors of R(0:j, :)
  double s1_sigma_next = 0.0;  // sigma_{k+1}(S_1), 0 when k == j
  double r22_norm = 0.0;       // ||S - Q_j Q_j^H S||_2, the trailing block norm
  bool bracket_found = true;   // false when no k has sigma_{k+1} < tau2 < sigma_k
  bool tau_order_warning = false;  // tau2 > tau1

  /// Q_j * Vr(:, 0:dim), the reconstructed basis of any dimension <= j.
  Matrix basis_of_dimension(Index dim) const;
  /// Upper bound sigma_{dim+1}(S_1) + ||R_22||_2 on ||S - X X^H S||_2.
  double upper_bound(Index dim) const;
};

/// Column-pivoted QR until the largest residual falls below tau1, SVD of the
/// j x M block R(0:j, :) = Q_j^H S, keep k with sigma_{k+1} < tau2 < sigma_k.
/// The factorization is the greedy engine (same pivots as MGS with pivoting,
/// reorthogonalized), so X_k is orthonormal. tau1 must exceed 1e3 * eps.
ReconstructionResult reconstruct_basis(const SnapshotMatrix& s, double tau1, double tau2);

}  // namespace rbqr

#endif  // RBQR_SVD_SUITE_HPP
