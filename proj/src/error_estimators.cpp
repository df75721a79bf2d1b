#include "rbqr/error_estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rbqr/orthogonalization.hpp"
#include "rbqr/parallel.hpp"
#include "rbqr/svd_suite.hpp"

namespace rbqr {

namespace {

void check_basis(const Matrix& q, Index rows, const char* who) {
  if (q.rows() != rows) {
    throw DimensionError(std::string(who) + ": basis has " + std::to_string(q.rows()) + " rows, snapshots have " +
                         std::to_string(rows));
  }
  if (q.cols() > 0) {
    const double defect = orthogonality_defect(q);
    if (!(defect <= kBasisOrthoTol)) {
      throw InputError(std::string(who) + ": basis is not orthonormal (defect " + std::to_string(defect) + ")");
    }
  }
}

Matrix residual_matrix(const SnapshotMatrix& s, const Matrix& q) {
  Matrix r = s.data();
  if (q.cols() == 0) return r;
  for (int pass = 0; pass < 2; ++pass) r.noalias() -= q * (q.adjoint() * r);
  return r;
}

}  // namespace

RealVector column_errors(const SnapshotMatrix& s, const Matrix& q, int workers) {
  check_basis(q, s.rows(), "column_errors");
  RealVector out(s.cols());
  const auto partition = make_partition(s.cols(), std::max(workers, 1));
  parallel_for_ranges(partition, [&](int, ColumnRange range) {
    Vector r(s.rows());
    for (Index i = range.begin; i < range.end; ++i) {
      r = s.col(i);
      if (q.cols() > 0) {
        for (int pass = 0; pass < 2; ++pass) r.noalias() -= q * (q.adjoint() * r);
      }
      out(i) = r.norm();
    }
  });
  return out;
}

ErrorReport projection_errors(const SnapshotMatrix& s, const Matrix& q, int workers) {
  check_basis(q, s.rows(), "projection_errors");
  ErrorReport rep;
  rep.per_column = column_errors(s, q, workers);
  rep.qr_err_max = rep.per_column.maxCoeff();
  const Matrix r = residual_matrix(s, q);
  rep.qr_err_F = r.norm();
  rep.qr_err_2 = two_norm(r);
  return rep;
}

Matrix trailing_block(const MgsResult& full, Index k) {
  if (k < 0 || k > full.size()) throw InputError("trailing_block: k out of range");
  const Index m = full.r.cols();
  return full.r.block(k, k, full.size() - k, m - k);
}

ErrorReport projection_errors(const SnapshotMatrix& s, const MgsResult& full, Index k, int workers) {
  if (k < 0 || k > full.size()) throw InputError("projection_errors: k out of range");
  if (full.r.cols() != s.cols()) throw DimensionError("projection_errors: factorization does not match the matrix");
  ErrorReport rep = projection_errors(s, Matrix(full.q.leftCols(k)), workers);
  const Matrix r22 = trailing_block(full, k);
  rep.has_r22 = true;
  rep.r22_F = r22.norm();
  rep.r22_2 = r22.size() > 0 ? two_norm(r22) : 0.0;
  rep.r22_columns = RealVector::Zero(s.cols());
  const Matrix tail = full.r.bottomRows(full.size() - k);
  for (Index p = 0; p < s.cols(); ++p) rep.r22_columns(full.permutation[p]) = tail.col(p).norm();
  return rep;
}

ValidationReport validate(const Matrix& q, const SnapshotMatrix& v, double tau, int workers) {
  if (!(tau > 0.0)) throw InputError("validate: tau must be positive");
  const RealVector err = column_errors(v, q, workers);
  ValidationReport rep;
  rep.worst.reserve(static_cast<std::size_t>(err.size()));
  for (Index i = 0; i < err.size(); ++i) {
    rep.worst.emplace_back(i, err(i));
    if (!(err(i) < tau)) rep.failing.push_back(i);
  }
  std::stable_sort(rep.worst.begin(), rep.worst.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  rep.max_error = err.size() > 0 ? err.maxCoeff() : 0.0;
  rep.pass = rep.failing.empty();
  return rep;
}

EnrichResult enrich(SnapshotMatrix& training, GreedyState& state, GreedyReport& report, const SnapshotMatrix& v,
                    int rounds, GreedyOptions options) {
  if (rounds < 0) throw InputError("enrich: rounds must be >= 0");
  if (v.rows() != training.rows()) throw DimensionError("enrich: validation rows differ from training rows");
  EnrichResult out;
  ValidationReport val = validate(state.basis(), v, options.tau, options.workers);
  out.basis_sizes.push_back(state.size());
  out.max_errors.push_back(val.max_error);
  while (!val.pass && out.rounds_used < rounds) {
    Matrix extra(v.rows(), static_cast<Index>(val.failing.size()));
    for (Index c = 0; c < extra.cols(); ++c) extra.col(c) = v.col(val.failing[static_cast<std::size_t>(c)]);
    training = training.with_appended(extra);
    extend_columns(state, training);
    options.k_max = std::min(training.rows(), training.cols());
    greedy_resume(training, state, report, options);
    ++out.rounds_used;
    val = validate(state.basis(), v, options.tau, options.workers);
    out.basis_sizes.push_back(state.size());
    out.max_errors.push_back(val.max_error);
  }
  out.passed = val.pass;
  out.final_validation = std::move(val);
  return out;
}

}  // namespace rbqr
