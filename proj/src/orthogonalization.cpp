#include "rbqr/orthogonalization.hpp"

#include <sstream>

namespace rbqr {

OrthoResult imgs_orthogonalize(const Eigen::Ref<const Matrix>& basis, const Eigen::Ref<const Vector>& v,
                               double kappa) {
  if (!(kappa > 1.0)) throw NumericalError("IMGS acceptance ratio kappa must exceed 1");
  if (basis.cols() > 0 && basis.rows() != v.size()) {
    throw DimensionError("IMGS: basis has " + std::to_string(basis.rows()) + " rows, vector has " +
                         std::to_string(v.size()));
  }
  const double v_norm = v.norm();
  if (v_norm == 0.0) throw NumericalError("IMGS: candidate vector is zero");

  const Index k = basis.cols();
  OrthoResult out{v, Vector::Zero(k), 0.0, 0};
  Vector& w = out.q;
  double before = v_norm;
  double after = v_norm;
  while (out.sweeps < kMaxSweeps) {
    for (Index j = 0; j < k; ++j) {
      const Scalar c = basis.col(j).dot(w);
      w.noalias() -= c * basis.col(j);
      out.coeffs(j) += c;
    }
    ++out.sweeps;
    after = w.norm();
    if (after > before / kappa) break;
    before = after;
  }

  if (after < 1e3 * kEpsilon * v_norm) {
    std::ostringstream msg;
    msg << "degenerate candidate: residual norm " << after << " relative to " << v_norm << " after " << out.sweeps
        << " sweeps";
    throw DegenerateCandidate(msg.str());
  }
  out.residual_norm = after;
  w /= after;
  return out;
}

double orthogonality_defect(const Eigen::Ref<const Matrix>& q) {
  if (q.cols() == 0) return 0.0;
  Matrix g = q.adjoint() * q;
  g.diagonal().array() -= Scalar(1.0);
  return g.cwiseAbs().maxCoeff();
}

}  // namespace rbqr
