#ifndef RBQR_ORTHOGONALIZATION_HPP
#define RBQR_ORTHOGONALIZATION_HPP

#include "rbqr/types.hpp"

namespace rbqr {

/// Orthogonality guaranteed between basis vectors built by imgs_orthogonalize.
inline constexpr double kOrthoTol = 1e-13;
/// Hard cap on MGS passes per candidate.
inline constexpr int kMaxSweeps = 5;
/// Acceptance ratio used by the greedy driver.
inline constexpr double kDefaultKappa = 2.0;

struct OrthoResult {
  Vector q;              // unit vector orthogonal to the basis
  Vector coeffs;         // summed projection coefficients against the basis (length k)
  double residual_norm;  // ||v - basis * coeffs||, so v ~ basis*coeffs + residual_norm*q
  int sweeps;            // MGS passes performed
};

/// Iterated modified Gram-Schmidt with a kappa reorthogonalization test.
///
/// One MGS pass projects `v` against the columns of `basis` one at a time.
/// Passes repeat while a pass shrinks the residual norm by a factor of
/// 1/kappa or more, i.e. the residual is accepted once
/// ||w_after|| > ||w_before|| / kappa. At most kMaxSweeps passes are run.
///
/// Throws DegenerateCandidate when the final residual is below
/// 1e3 * eps * ||v||, and NumericalError if v is zero or kappa <= 1.
OrthoResult imgs_orthogonalize(const Eigen::Ref<const Matrix>& basis, const Eigen::Ref<const Vector>& v,
                               double kappa = kDefaultKappa);

/// max_{ij} |(Q^H Q - I)_{ij}|
double orthogonality_defect(const Eigen::Ref<const Matrix>& q);

}  // namespace rbqr

#endif  // RBQR_ORTHOGONALIZATION_HPP
