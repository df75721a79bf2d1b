#ifndef RBQR_GREEDY_QR_HPP
#define RBQR_GREEDY_QR_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rbqr/parallel.hpp"
#include "rbqr/snapshot_matrix.hpp"
#include "rbqr/types.hpp"

namespace rbqr {

/// Residual re-base threshold: once a column's recurrence residual falls
/// below this fraction of its reference norm, the residual is recomputed
/// from the stored R entries and becomes the new reference.
inline constexpr double kRebaseRatio = 1e-3;
/// Columns whose reference norm is already below this fraction of ||s_i||^2
/// are numerically inside the span and are never re-based again.
inline constexpr double kRebaseFloor = 1e-28;

/// Working state of the RB-greedy / column-pivoted QR.
///
/// With k = size() basis vectors:
///  - q.leftCols(k) is the orthonormal basis Q_k,
///  - r.topRows(k) holds R(j, i) = <q_j, s_i> for every column i, indexed by
///    ORIGINAL column index; for a pivot column the entries are the IMGS
///    coefficients and R(j, pivots[j]) is the (real) residual norm,
///  - residual_sq(i) = max(base_sq[i] - acc[i], 0) is ||s_i - Q_k Q_k^H s_i||^2.
struct GreedyState {
  Matrix q;                      // N x capacity
  RowMatrix r;                   // capacity x M
  std::vector<Index> pivots;     // chosen columns, in order of selection
  std::vector<double> norms_sq;  // ||s_i||^2
  std::vector<double> base_sq;   // reference squared norm (||s_i||^2 until re-based)
  std::vector<double> acc;       // sum |c_j|^2 accumulated since the last re-base
  std::vector<char> selected;

  Index size() const { return static_cast<Index>(pivots.size()); }
  Index rows() const { return q.rows(); }
  Index cols() const { return static_cast<Index>(norms_sq.size()); }
  Index capacity() const { return q.cols(); }

  auto basis() const { return q.leftCols(size()); }
  auto r_rows() const { return r.topRows(size()); }

  /// Grows storage so that `capacity` basis vectors fit.
  void reserve(Index capacity);
};

/// Empty basis over the columns of `s`.
GreedyState make_greedy_state(const SnapshotMatrix& s);

/// Squared projection residual of column i, clamped at zero. Selected pivot
/// columns report exactly zero.
double residual_sq(const GreedyState& state, Index i);

struct PivotResult {
  Index index = 0;
  double value = 0.0;  // squared residual of the chosen column
};

/// Global argmax of residual_sq over a disjoint cover of the columns, one
/// thread per range. Ties go to the lowest column index, so the answer does
/// not depend on the partition. All-zero residuals yield (0, 0.0).
PivotResult pivot_search(const GreedyState& state, std::span<const ColumnRange> partition);

enum class GreedyStatus { tolerance_reached, k_max_reached, rank_exhausted };
const char* to_string(GreedyStatus status);

/// Per-iteration wall-clock timings in seconds. T_pivot_plus_C includes
/// publishing the basis vector and the cross-thread reduction.
struct IterationTiming {
  double t_pivot_c = 0.0;
  double t_imgs = 0.0;
  double t_total = 0.0;
};

/// Operation counters. Pivot search counts 2N per inner product
/// (multiply + add); orthogonalization counts N per basis vector per MGS
/// pass plus N for normalization, the convention of the 1/2 nu N k(k+1) model.
struct FlopCounters {
  std::uint64_t pivot = 0;
  std::uint64_t ortho = 0;
};

struct GreedyReport {
  std::vector<double> sigma_hat;  // sigma_hat[j]: max residual before selecting pivot j
  double final_error = 0.0;       // max residual with the final basis
  std::vector<Index> pivots;
  std::vector<IterationTiming> timings;
  std::vector<int> sweeps;
  FlopCounters flops;
  std::uint64_t rebases = 0;
  double setup_seconds = 0.0;
  GreedyStatus status = GreedyStatus::tolerance_reached;

  bool tolerance_reached() const { return status == GreedyStatus::tolerance_reached; }
};

struct GreedyOptions {
  double tau = 1e-8;
  Index k_max = 100;
  int workers = 1;
  double kappa = 2.0;
  /// Called after every iteration, outside the timed region.
  std::function<void(const GreedyState&, const GreedyReport&)> on_iteration;
};

struct GreedyResult {
  GreedyState state;
  GreedyReport report;
};

/// RB-greedy column-pivoted QR of `s`.
///
/// Stops at the smallest k with max_i ||s_i - Q_k Q_k^H s_i|| < tau, or at
/// k_max, or when the next candidate is numerically in span(Q_k). Pivots and
/// basis are identical for every worker count.
///
/// Throws InputError for tau <= 1e3*eps, k_max > min(N, M) or workers < 1.
GreedyResult greedy_build(const SnapshotMatrix& s, const GreedyOptions& options);

/// Continues a greedy run on `s` from `state` (which must already cover every
/// column of `s`), appending to `report`.
void greedy_resume(const SnapshotMatrix& s, GreedyState& state, GreedyReport& report, const GreedyOptions& options);

/// Extends `state` to the columns of `s` beyond state.cols(). The leading
/// columns of `s` must be the ones the state was built from. New columns get
/// their R entries and an exactly recomputed residual.
void extend_columns(GreedyState& state, const SnapshotMatrix& s);

struct FlopEstimate {
  double pivot = 0.0;  // 2 M N k
  double ortho = 0.0;  // 1/2 nu N k (k + 1)
};

/// Closed-form operation count of k greedy iterations.
FlopEstimate flop_estimate(double n, double m, double k, double nu_hat);
/// MGS with pivoting reference count 6kNM - 3Nk^2.
double mgs_flop_count(double k, double n, double m);
/// Greedy without the residual recurrence: 3/2 k^2 N M.
double naive_greedy_flop_count(double k, double n, double m);

}  // namespace rbqr

#endif  // RBQR_GREEDY_QR_HPP
