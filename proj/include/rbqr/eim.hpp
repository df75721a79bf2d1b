#ifndef RBQR_EIM_HPP
#define RBQR_EIM_HPP

#include <vector>

#include <Eigen/LU>

#include "rbqr/types.hpp"

namespace rbqr {

/// Empirical interpolation operator for an orthonormal basis Q (N x k).
struct EimOperator {
  std::vector<Index> nodes;  // k distinct row indices, in selection order
  Matrix node_matrix;        // (a, b) = Q(nodes[a], b)
  Eigen::PartialPivLU<Matrix> lu;
  double lebesgue = 0.0;     // ||node_matrix^{-1}||_2
  double condition = 0.0;    // 2-norm condition number of node_matrix

  Index size() const { return static_cast<Index>(nodes.size()); }
  /// f restricted to the nodes.
  Vector sample(const Eigen::Ref<const Vector>& f) const;
};

/// Greedy EIM node selection. Node 0 maximizes |q_0|; node j maximizes the
/// residual |q_j - I_{j-1}[q_j]| of interpolating q_j from the earlier
/// nodes. Ties go to the lowest row.
///
/// Throws InputError for an empty or non-orthonormal basis and
/// DegenerateCandidate when a residual vanishes before k nodes are found.
EimOperator build_eim(const Matrix& q);

/// Q c with node_matrix c = samples. Throws DimensionError on a length mismatch.
Vector eim_interpolate(const EimOperator& op, const Matrix& q, const Eigen::Ref<const Vector>& samples);

}  // namespace rbqr

#endif  // RBQR_EIM_HPP
