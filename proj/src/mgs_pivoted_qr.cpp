#include "rbqr/mgs_pivoted_qr.hpp"

#include <algorithm>

namespace rbqr {

Matrix MgsResult::r_original_order() const {
  Matrix out(r.rows(), r.cols());
  for (Index p = 0; p < r.cols(); ++p) out.col(permutation[p]) = r.col(p);
  return out;
}

MgsResult mgs_pivoted_qr(const SnapshotMatrix& s, double tau, Index k_max) {
  if (!(tau > 0.0)) throw InputError("mgs_pivoted_qr: tau must be positive");
  const Index n = s.rows();
  const Index m = s.cols();
  k_max = std::min({k_max, n, m});
  if (k_max < 1) throw InputError("mgs_pivoted_qr: k_max must be >= 1");

  Matrix v = s.data();
  Matrix q(n, k_max);
  Matrix r_orig = Matrix::Zero(k_max, m);  // indexed by original column
  std::vector<char> selected(static_cast<std::size_t>(m), 0);
  MgsResult out;

  Index k = 0;
  while (k < k_max) {
    Index best = -1;
    double best_norm = -1.0;
    for (Index j = 0; j < m; ++j) {
      if (selected[static_cast<std::size_t>(j)]) continue;
      const double nrm = v.col(j).norm();
      if (nrm > best_norm) {
        best_norm = nrm;
        best = j;
      }
    }
    if (best < 0) break;
    if (best_norm == 0.0) out.rank_exhausted = true;
    if (best_norm <= tau) {
      out.tolerance_reached = true;
      break;
    }
    selected[static_cast<std::size_t>(best)] = 1;
    out.pivots.push_back(best);
    r_orig(k, best) = best_norm;
    q.col(k) = v.col(best) / best_norm;
    v.col(best).setZero();
    for (Index j = 0; j < m; ++j) {
      if (selected[static_cast<std::size_t>(j)]) continue;
      const Scalar c = q.col(k).dot(v.col(j));
      r_orig(k, j) = c;
      v.col(j).noalias() -= c * q.col(k);
    }
    ++k;
  }
  if (k == k_max && !out.tolerance_reached) {
    // report whether the remaining residual already satisfies tau
    double rest = 0.0;
    for (Index j = 0; j < m; ++j)
      if (!selected[static_cast<std::size_t>(j)]) rest = std::max(rest, v.col(j).norm());
    out.tolerance_reached = rest <= tau;
  }

  out.q = q.leftCols(k);
  out.permutation = complete_permutation(out.pivots, m);
  out.r.resize(k, m);
  for (Index p = 0; p < m; ++p) out.r.col(p) = r_orig.topRows(k).col(out.permutation[p]);
  return out;
}

}  // namespace rbqr
