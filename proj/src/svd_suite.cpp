#include "rbqr/svd_suite.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "rbqr/greedy_qr.hpp"

namespace rbqr {

namespace {

void check_input(const Matrix& a, const char* who) {
  if (a.rows() == 0 || a.cols() == 0) throw InputError(std::string(who) + ": empty matrix");
  if (!a.allFinite()) throw InputError(std::string(who) + ": matrix has non-finite entries");
}

}  // namespace

SvdResult svd(const Matrix& a) {
  check_input(a, "svd");
  Eigen::BDCSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) {
    throw NumericalError("svd: no convergence for " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " matrix, ||A||_F = " + std::to_string(a.norm()));
  }
  SvdResult out{dec.matrixU(), dec.singularValues(), dec.matrixV()};
  const double resid = (a - out.v * out.sigma.asDiagonal() * out.w.adjoint()).norm();
  if (!(resid <= 1e-10 * std::max(a.norm(), 1e-300))) {
    throw NumericalError("svd: reconstruction residual " + std::to_string(resid) + " too large");
  }
  return out;
}

RealVector singular_values(const Matrix& a) {
  check_input(a, "singular_values");
  Eigen::BDCSVD<Matrix> dec(a);
  if (dec.info() != Eigen::Success) throw NumericalError("singular_values: no convergence");
  return dec.singularValues();
}

double two_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a)(0);
}

Index numerical_rank(const RealVector& sigma) {
  if (sigma.size() == 0) return 0;
  const double cut = 100.0 * kEpsilon * sigma(0);
  Index r = 0;
  while (r < sigma.size() && sigma(r) > cut) ++r;
  return r;
}

PodResult pod_basis(const SnapshotMatrix& s, double tau) {
  if (!(tau > 0.0)) throw InputError("pod_basis: tau must be positive");
  const SvdResult d = svd(s.data());
  PodResult out;
  out.sigma = d.sigma;
  const Index p = d.sigma.size();
  Index k = 0;
  while (k < p && d.sigma(k) >= tau) ++k;
  out.k = k;
  out.tolerance_reached = k < p;
  out.basis = d.v.leftCols(k);
  return out;
}

Matrix optimal_rrqr(const SnapshotMatrix& s, Index k) {
  if (k < 1) throw InputError("optimal_rrqr: k must be >= 1");
  const SvdResult d = svd(s.data());
  const Index rank = numerical_rank(d.sigma);
  if (k > rank) {
    throw NumericalError("optimal_rrqr: k = " + std::to_string(k) + " exceeds the numerical rank " + std::to_string(rank));
  }
  const Matrix b = d.sigma.head(k).asDiagonal() * d.w.leftCols(k).adjoint();
  Eigen::HouseholderQR<Matrix> qr(b);
  const Matrix qc = qr.householderQ() * Matrix::Identity(k, k);
  return d.v.leftCols(k) * qc;
}

Matrix ReconstructionResult::basis_of_dimension(Index dim) const {
  if (dim < 0 || dim > j) throw InputError("basis_of_dimension: dimension out of range");
  return qr_basis * r_left.leftCols(dim);
}

double ReconstructionResult::upper_bound(Index dim) const {
  const double s1 = dim < sigma_r.size() ? sigma_r(dim) : 0.0;
  return s1 + r22_norm;
}

ReconstructionResult reconstruct_basis(const SnapshotMatrix& s, double tau1, double tau2) {
  if (!(tau1 > 0.0) || !(tau2 > 0.0)) throw InputError("reconstruct_basis: tau1 and tau2 must be positive");
  ReconstructionResult out;
  out.tau_order_warning = tau2 > tau1;

  // pivoted QR to depth j; the IMGS engine keeps Q_j orthonormal where plain MGS drifts
  GreedyOptions opt;
  opt.tau = tau1;
  opt.k_max = std::min(s.rows(), s.cols());
  const GreedyResult g = greedy_build(s, opt);
  out.j = g.state.size();
  out.qr_basis = g.state.basis();
  if (out.j == 0) {
    out.basis = Matrix(s.rows(), 0);
    out.sigma_r = RealVector(0);
    out.r_left = Matrix(0, 0);
    out.r22_norm = two_norm(s.data());
    out.bracket_found = false;
    return out;
  }
  const Matrix r = out.qr_basis.adjoint() * s.data();

  // SVD of the small j x M block only
  const SvdResult d = svd(r);
  out.sigma_r = d.sigma;
  out.r_left = d.v;

  const Index j = out.j;
  Index k = 0;
  while (k < j && d.sigma(k) >= tau2) ++k;
  if (k == 0 || !(d.sigma(k - 1) > tau2)) {
    out.bracket_found = false;
    k = j;
  }
  out.k = k;
  out.s1_sigma_next = k < j ? d.sigma(k) : 0.0;
  out.basis = out.qr_basis * d.v.leftCols(k);

  Matrix resid = s.data();
  resid.noalias() -= out.qr_basis * r;
  out.r22_norm = two_norm(resid);
  return out;
}

}  // namespace rbqr
