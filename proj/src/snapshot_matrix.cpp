#include "rbqr/snapshot_matrix.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rbqr {

SnapshotMatrix::SnapshotMatrix(Matrix data) : data_(std::move(data)) {
  if (data_.rows() == 0 || data_.cols() == 0) {
    std::ostringstream msg;
    msg << "snapshot matrix has a zero dimension (" << data_.rows() << " x " << data_.cols() << ")";
    throw InputError(msg.str());
  }
  norms_sq_.resize(static_cast<size_t>(data_.cols()));
  for (Index j = 0; j < data_.cols(); ++j) {
    double sum = 0.0;
    for (Index i = 0; i < data_.rows(); ++i) {
      const Scalar z = data_(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        std::ostringstream msg;
        msg << "non-finite entry at (" << i << ", " << j << ")";
        throw InputError(msg.str());
      }
      sum += std::norm(z);
    }
    norms_sq_[static_cast<size_t>(j)] = sum;
  }
}

double SnapshotMatrix::column_norm_sq(Index i) const {
  if (i < 0 || i >= cols()) {
    throw std::out_of_range("column index " + std::to_string(i) + " out of range [0, " +
                            std::to_string(cols()) + ")");
  }
  return norms_sq_[static_cast<size_t>(i)];
}

SnapshotMatrix SnapshotMatrix::with_appended(const Matrix& extra) const {
  if (extra.cols() == 0) return *this;
  if (extra.rows() != rows()) {
    throw DimensionError("appended columns have " + std::to_string(extra.rows()) +
                         " rows, expected " + std::to_string(rows()));
  }
  Matrix joined(rows(), cols() + extra.cols());
  joined.leftCols(cols()) = data_;
  joined.rightCols(extra.cols()) = extra;
  return SnapshotMatrix(std::move(joined));
}

SnapshotMatrix SnapshotMatrix::select_columns(std::span<const Index> columns) const {
  Matrix out(rows(), static_cast<Index>(columns.size()));
  for (size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] < 0 || columns[c] >= cols()) throw std::out_of_range("column index out of range");
    out.col(static_cast<Index>(c)) = data_.col(columns[c]);
  }
  return SnapshotMatrix(std::move(out));
}

double column_norm_sq(const SnapshotMatrix& s, Index i) { return s.column_norm_sq(i); }

Permutation::Permutation(std::vector<Index> order) : order_(std::move(order)) {
  std::vector<char> seen(order_.size(), 0);
  for (Index v : order_) {
    if (v < 0 || v >= size() || seen[static_cast<size_t>(v)]) {
      throw InputError("permutation is not a bijection (offending entry " + std::to_string(v) + ")");
    }
    seen[static_cast<size_t>(v)] = 1;
  }
}

Permutation Permutation::identity(Index n) {
  std::vector<Index> order(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  return Permutation(std::move(order));
}

std::vector<Index> Permutation::inverse() const {
  std::vector<Index> inv(order_.size());
  for (size_t p = 0; p < order_.size(); ++p) inv[static_cast<size_t>(order_[p])] = static_cast<Index>(p);
  return inv;
}

Permutation complete_permutation(std::span<const Index> prefix, Index n) {
  std::vector<char> used(static_cast<size_t>(n), 0);
  std::vector<Index> order;
  order.reserve(static_cast<size_t>(n));
  for (Index p : prefix) {
    if (p < 0 || p >= n || used[static_cast<size_t>(p)]) {
      throw InputError("pivot prefix entry " + std::to_string(p) + " invalid or repeated");
    }
    used[static_cast<size_t>(p)] = 1;
    order.push_back(p);
  }
  for (Index i = 0; i < n; ++i)
    if (!used[static_cast<size_t>(i)]) order.push_back(i);
  return Permutation(std::move(order));
}

}  // namespace rbqr
