#ifndef RBQR_SNAPSHOT_MATRIX_HPP
#define RBQR_SNAPSHOT_MATRIX_HPP

#include <span>
#include <vector>

#include "rbqr/types.hpp"

namespace rbqr {

/// Dense complex N x M matrix whose columns are snapshots s_0 .. s_{M-1}.
///
/// Immutable after construction. Every entry is finite and the squared
/// Euclidean norm of each column is cached, so the pivot search can
/// reuse ||s_i||^2 without touching the data again.
class SnapshotMatrix {
 public:
  SnapshotMatrix() = default;

  /// Takes ownership of `data`. Throws InputError on a zero dimension or a
  /// non-finite entry.
  explicit SnapshotMatrix(Matrix data);

  Index rows() const { return data_.rows(); }
  Index cols() const { return data_.cols(); }
  bool empty() const { return data_.size() == 0; }

  const Matrix& data() const { return data_; }
  auto col(Index i) const { return data_.col(i); }

  /// Cached ||s_i||_2^2. Throws std::out_of_range for a bad index.
  double column_norm_sq(Index i) const;
  std::span<const double> col_norms_sq() const { return norms_sq_; }

  /// New matrix with the columns of `extra` appended on the right.
  SnapshotMatrix with_appended(const Matrix& extra) const;

  /// New matrix made of the listed columns, in order.
  SnapshotMatrix select_columns(std::span<const Index> columns) const;

 private:
  Matrix data_;
  std::vector<double> norms_sq_;
};

double column_norm_sq(const SnapshotMatrix& s, Index i);

/// Column permutation stored as an index vector: position p holds the
/// original column index placed there.
class Permutation {
 public:
  Permutation() = default;
  /// Throws InputError unless `order` is a bijection on {0..size-1}.
  explicit Permutation(std::vector<Index> order);

  static Permutation identity(Index n);

  Index size() const { return static_cast<Index>(order_.size()); }
  Index operator[](Index p) const { return order_[static_cast<size_t>(p)]; }
  const std::vector<Index>& order() const { return order_; }

  /// position_of[i] = p such that order[p] == i.
  std::vector<Index> inverse() const;

 private:
  std::vector<Index> order_;
};

/// Completes a pivot prefix into a full permutation; the remaining columns
/// follow in ascending order.
Permutation complete_permutation(std::span<const Index> prefix, Index n);

}  // namespace rbqr

#endif  // RBQR_SNAPSHOT_MATRIX_HPP
