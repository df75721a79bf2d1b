#include "rbqr/eim.hpp"

#include <cmath>
#include <string>

#include "rbqr/error_estimators.hpp"
#include "rbqr/orthogonalization.hpp"
#include "rbqr/svd_suite.hpp"

namespace rbqr {

namespace {

// argmax |v|, lowest index on ties
Index abs_argmax(const Vector& v, double& value) {
  Index best = 0;
  value = -1.0;
  for (Index r = 0; r < v.size(); ++r) {
    const double a = std::abs(v(r));
    if (a > value) {
      value = a;
      best = r;
    }
  }
  return best;
}

}  // namespace

Vector EimOperator::sample(const Eigen::Ref<const Vector>& f) const {
  Vector out(size());
  for (Index a = 0; a < size(); ++a) out(a) = f(nodes[static_cast<std::size_t>(a)]);
  return out;
}

EimOperator build_eim(const Matrix& q) {
  const Index n = q.rows();
  const Index k = q.cols();
  if (k < 1 || n < k) throw InputError("build_eim: basis must have 1 <= k <= N columns");
  if (!(orthogonality_defect(q) <= kBasisOrthoTol)) throw InputError("build_eim: basis is not orthonormal");

  EimOperator op;
  op.node_matrix = Matrix::Zero(k, k);
  Vector resid = q.col(0);
  for (Index j = 0; j < k; ++j) {
    if (j > 0) {
      const Matrix sub = op.node_matrix.topLeftCorner(j, j);
      Vector rhs(j);
      for (Index a = 0; a < j; ++a) rhs(a) = q(op.nodes[static_cast<std::size_t>(a)], j);
      const Vector c = sub.partialPivLu().solve(rhs);
      resid = q.col(j) - q.leftCols(j) * c;
    }
    double value = 0.0;
    const Index node = abs_argmax(resid, value);
    if (!(value > 100.0 * kEpsilon * q.col(j).cwiseAbs().maxCoeff())) {
      throw DegenerateCandidate("build_eim: interpolation residual vanished at basis vector " + std::to_string(j));
    }
    op.nodes.push_back(node);
    for (Index b = 0; b < k; ++b) op.node_matrix(j, b) = q(node, b);
  }
  op.lu.compute(op.node_matrix);
  const RealVector sv = singular_values(op.node_matrix);
  if (!(sv(k - 1) > 0.0)) throw NumericalError("build_eim: node matrix is singular");
  op.lebesgue = 1.0 / sv(k - 1);
  op.condition = sv(0) / sv(k - 1);
  return op;
}

Vector eim_interpolate(const EimOperator& op, const Matrix& q, const Eigen::Ref<const Vector>& samples) {
  if (samples.size() != op.size() || q.cols() != op.size()) {
    throw DimensionError("eim_interpolate: expected " + std::to_string(op.size()) + " samples and basis vectors");
  }
  return q * op.lu.solve(samples);
}

}  // namespace rbqr
