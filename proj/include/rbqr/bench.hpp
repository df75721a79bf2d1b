#ifndef RBQR_BENCH_HPP
#define RBQR_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rbqr/greedy_qr.hpp"
#include "rbqr/snapshot_matrix.hpp"

namespace rbqr {

/// Leading iterations dropped before taking medians.
inline constexpr int kWarmupIterations = 3;

struct IterationRecord {
  int workers = 1;
  Index j = 0;
  IterationTiming timing;
};

struct ScalingRow {
  int workers = 1;
  Index m = 0;                  // columns used by this run
  Index k = 0;                  // iterations performed
  double t_pivot_c = 0.0;       // median per-iteration pivot search + reduction
  double t_imgs = 0.0;          // median per-iteration orthogonalization
  double t_total = 0.0;         // median per-iteration total
  double total_seconds = 0.0;   // sum of per-iteration totals
  double scaled_total = 0.0;    // total_seconds / k
  double efficiency = 1.0;      // T_1 / (C T_C) on the pivot search
  double speedup = 1.0;         // C * efficiency
  double predicted_efficiency = 1.0;  // 1 - nu k (C - 1) / (2 M)
  double mean_sweeps = 0.0;
  double identity_violation = 0.0;    // worst |T_total - T_pivot_c - T_imgs| / T_total
  double pivot_spread = 1.0;    // max / min T_pivot_c over non-warmup iterations
  double imgs_r2 = 0.0;         // R^2 of a linear fit of T_imgs against j, j >= 10
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  std::vector<IterationRecord> iterations;

  /// Worst relative timing-identity violation across all runs.
  double worst_identity_violation() const;
  std::string summary() const;
};

/// Strong scaling on a fixed matrix: k greedy iterations per worker count.
/// worker_counts must be ascending and start at 1. Every run must reproduce
/// the pivots and basis of the single-worker run bit for bit, otherwise
/// DeterminismError is thrown before any timing is reported.
ScalingTable strong_scaling(const SnapshotMatrix& s, Index k, const std::vector<int>& worker_counts);

/// Weak scaling: a random n x (C * cols_per_worker) matrix per worker count C,
/// k iterations each; scaled_total = total time / k. With `verify`, each run
/// is checked against a single-worker run on the same matrix.
ScalingTable weak_scaling(Index n, Index cols_per_worker, Index k, const std::vector<int>& worker_counts,
                          std::uint64_t seed = 1, bool verify = true);

/// Median of `values`, NaN for an empty input.
double median(std::vector<double> values);

/// Coefficient of determination of the least-squares line through (x, y).
double linear_fit_r2(const std::vector<double>& x, const std::vector<double>& y);

/// max_j |T_total - (T_pivot_c + T_imgs)| / T_total.
double timing_identity_violation(const std::vector<IterationTiming>& timings);

/// Writes one row per (worker count, iteration): C,j,t_pivot_c,t_imgs,t_total.
void write_timings_csv(const std::string& path, const std::vector<IterationRecord>& iterations);

}  // namespace rbqr

#endif  // RBQR_BENCH_HPP
