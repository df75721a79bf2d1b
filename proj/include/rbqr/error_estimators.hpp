#ifndef RBQR_ERROR_ESTIMATORS_HPP
#define RBQR_ERROR_ESTIMATORS_HPP

#include <utility>
#include <vector>

#include "rbqr/greedy_qr.hpp"
#include "rbqr/mgs_pivoted_qr.hpp"
#include "rbqr/snapshot_matrix.hpp"
#include "rbqr/types.hpp"

namespace rbqr {

/// Bases whose orthonormality defect exceeds this are rejected.
inline constexpr double kBasisOrthoTol = 1e-10;

struct ErrorReport {
  double qr_err_2 = 0.0;    // ||S - Q Q^H S||_2
  double qr_err_F = 0.0;    // ||S - Q Q^H S||_F
  double qr_err_max = 0.0;  // max_i ||s_i - Q Q^H s_i||_2
  double r22_2 = 0.0;       // ||R22||_2, only with a full factorization
  double r22_F = 0.0;
  bool has_r22 = false;
  RealVector per_column;    // length M, original column order
  RealVector r22_columns;   // ||r~_i||_2 per original column, only with has_r22
};

/// Direct projection errors of the columns of `s` onto span(q).
/// Throws InputError when q is not orthonormal or the row counts differ.
ErrorReport projection_errors(const SnapshotMatrix& s, const Matrix& q, int workers = 1);

/// Same with Q_k = full.q(:, 0:k), and the trailing block R22 = R(k:, k:) of
/// `full` (a factorization of s) evaluated alongside.
ErrorReport projection_errors(const SnapshotMatrix& s, const MgsResult& full, Index k, int workers = 1);

/// R(k:, k:) of a pivoted factorization, in pivoted column order.
Matrix trailing_block(const MgsResult& full, Index k);

/// ||s_i - Q Q^H s_i||_2 for every column, computed with two projection passes.
RealVector column_errors(const SnapshotMatrix& s, const Matrix& q, int workers = 1);

struct ValidationReport {
  std::vector<std::pair<Index, double>> worst;  // every column, error descending
  std::vector<Index> failing;                   // columns with error >= tau, ascending
  double max_error = 0.0;
  bool pass = false;
};

/// Out-of-sample check: pass iff every column of v has error < tau.
ValidationReport validate(const Matrix& q, const SnapshotMatrix& v, double tau, int workers = 1);

struct EnrichResult {
  bool passed = false;
  int rounds_used = 0;
  std::vector<Index> basis_sizes;   // after each round (entry 0: before enrichment)
  std::vector<double> max_errors;   // validation max error, same indexing
  ValidationReport final_validation;
};

/// Iterative refinement: each round appends every failing validation column
/// to `training` and resumes the greedy to options.tau, stopping as soon as
/// validation passes. `state` and `report` must come from a greedy run on
/// `training`.
EnrichResult enrich(SnapshotMatrix& training, GreedyState& state, GreedyReport& report, const SnapshotMatrix& v,
                    int rounds, GreedyOptions options);

}  // namespace rbqr

#endif  // RBQR_ERROR_ESTIMATORS_HPP
