#ifndef RBQR_MGS_PIVOTED_QR_HPP
#define RBQR_MGS_PIVOTED_QR_HPP

#include <vector>

#include "rbqr/snapshot_matrix.hpp"
#include "rbqr/types.hpp"

namespace rbqr {

/// Result of modified Gram-Schmidt with column pivoting.
///
/// S * Pi ~ Q * R where Pi = permutation (pivots first, remaining columns
/// in ascending order) and R is k x M in that pivoted column order, upper
/// trapezoidal, with R(j, j) = ||V(:, pivots[j])|| at selection time.
struct MgsResult {
  Matrix q;                  // N x k
  Matrix r;                  // k x M, pivoted column order
  std::vector<Index> pivots;
  Permutation permutation;   // length M
  bool tolerance_reached = false;
  bool rank_exhausted = false;

  Index size() const { return q.cols(); }
  /// R with columns restored to the original ordering of S.
  Matrix r_original_order() const;
};

/// Algorithm "MGS with pivoting": explicit column updates
/// V(:, j) <- V(:, j) - R(k, j) Q(:, k), norms recomputed from the updated
/// columns at every step. Stops once the next diagonal entry is <= tau, at
/// k_max basis vectors, or when the next candidate column is exactly zero.
MgsResult mgs_pivoted_qr(const SnapshotMatrix& s, double tau, Index k_max);

}  // namespace rbqr

#endif  // RBQR_MGS_PIVOTED_QR_HPP
