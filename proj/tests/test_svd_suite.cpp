#include <gtest/gtest.h>

#include <Eigen/QR>

#include "rbqr/greedy_qr.hpp"
#include "rbqr/models.hpp"
#include "rbqr/orthogonalization.hpp"
#include "rbqr/svd_suite.hpp"
#include "test_support.hpp"

using namespace rbqr;
using rbqr::testing::decaying_matrix;
using rbqr::testing::gram_singular_values;
using rbqr::testing::gram_two_norm;
using rbqr::testing::jacobi_singular_values;
using rbqr::testing::random_matrix;
using rbqr::testing::rank_k_matrix;
using rbqr::testing::rel_diff;
using rbqr::testing::residual_matrix;

namespace {

Matrix diag(std::initializer_list<double> d, Index rows = -1) {
  const Index n = static_cast<Index>(d.size());
  Matrix a = Matrix::Zero(rows < 0 ? n : rows, n);
  Index i = 0;
  for (double v : d) a(i, i) = v, ++i;
  return a;
}

void check_svd_invariants(const Matrix& a) {
  const SvdResult d = svd(a);
  const Index p = std::min(a.rows(), a.cols());
  ASSERT_EQ(d.sigma.size(), p);
  EXPECT_LE((a - d.v * d.sigma.asDiagonal() * d.w.adjoint()).norm(), 1e-12 * a.norm());
  for (Index i = 0; i < p; ++i) {
    EXPECT_GE(d.sigma(i), 0.0);
    if (i > 0) {
      EXPECT_LE(d.sigma(i), d.sigma(i - 1));
    }
  }
  EXPECT_LE(orthogonality_defect(d.v), 1e-13);
  EXPECT_LE(orthogonality_defect(d.w), 1e-13);
}

}  // namespace

TEST(Svd, Diagonal) {
  const SvdResult d = svd(diag({2.0, 1.0}));
  EXPECT_NEAR(d.sigma(0), 2.0, 1e-15);
  EXPECT_NEAR(d.sigma(1), 1.0, 1e-15);
  EXPECT_LE((d.v.cwiseAbs() - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LE((d.w.cwiseAbs() - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-15);
}

TEST(Svd, RankOneOuterProduct) {
  Vector u = random_matrix(6, 1, 1).col(0);
  Vector v = random_matrix(4, 1, 2).col(0);
  u *= 3.0 / u.norm();
  v /= v.norm();
  const RealVector s = singular_values(u * v.adjoint());
  EXPECT_NEAR(s(0), 3.0, 1e-14);
  for (Index i = 1; i < s.size(); ++i) EXPECT_LE(s(i), 1e-14);
}

TEST(Svd, MatchesGramOracle) {
  const Matrix a = random_matrix(20, 30, 3);
  const RealVector s = singular_values(a);
  const RealVector g = gram_singular_values(a);
  for (Index i = 0; i < s.size(); ++i) EXPECT_LE(std::abs(s(i) - g(i)), 1e-10 * g(0));
}

TEST(Svd, InvariantsOnAssortedShapes) {
  check_svd_invariants(random_matrix(20, 30, 4));
  check_svd_invariants(random_matrix(70, 12, 5));
  check_svd_invariants(decaying_matrix(40, 40, 0.3, 6));
  check_svd_invariants(rank_k_matrix(25, 35, 4, 7));
}

TEST(Svd, Errors) {
  EXPECT_THROW(svd(Matrix(0, 3)), InputError);
  Matrix a = Matrix::Ones(2, 2);
  a(1, 1) = Scalar(std::numeric_limits<double>::infinity(), 0.0);
  EXPECT_THROW(svd(a), InputError);
}

TEST(Norms, InvariantUnderOrthogonalFactor) {
  const Matrix b = random_matrix(30, 20, 8);
  Eigen::HouseholderQR<Matrix> qr(random_matrix(30, 30, 9));
  const Matrix u = qr.householderQ();
  EXPECT_LE(rel_diff((u * b).norm(), b.norm()), 1e-12);
  EXPECT_LE(rel_diff(two_norm(u * b), two_norm(b)), 1e-12);
  EXPECT_LE(rel_diff(two_norm(b), gram_two_norm(b)), 1e-12);
  EXPECT_EQ(two_norm(Matrix(0, 0)), 0.0);
}

TEST(NumericalRank, Threshold) {
  RealVector s(4);
  s << 1.0, 1e-10, 1e-14, 1e-15;
  EXPECT_EQ(numerical_rank(s), 2);
  EXPECT_EQ(numerical_rank(singular_values(rank_k_matrix(30, 30, 5, 10))), 5);
}

TEST(Pod, DiagonalExample) {
  const PodResult p = pod_basis(SnapshotMatrix(diag({3.0, 2.0, 1.0})), 1.5);
  EXPECT_EQ(p.k, 2);
  EXPECT_TRUE(p.tolerance_reached);
  EXPECT_LE((p.basis.cwiseAbs() - Eigen::MatrixXd::Identity(3, 2)).norm(), 1e-15);
  const PodResult full = pod_basis(SnapshotMatrix(diag({3.0, 2.0, 1.0})), 0.5);
  EXPECT_EQ(full.k, 3);
  EXPECT_FALSE(full.tolerance_reached);
  EXPECT_THROW(pod_basis(SnapshotMatrix(diag({1.0})), 0.0), InputError);
}

TEST(Pod, ErrorIdentities) {
  // structured: prescribed spectrum, the construction itself is the oracle
  RealVector spectrum(45);
  for (Index i = 0; i < 45; ++i) spectrum(i) = std::pow(0.6, static_cast<double>(i));
  const std::vector<std::pair<Matrix, RealVector>> cases = {
      {random_matrix(35, 50, 11), gram_singular_values(random_matrix(35, 50, 11))},
      {random_matrix(50, 35, 12), gram_singular_values(random_matrix(50, 35, 12))},
      {matrix_with_spectrum(60, 45, spectrum, 13), spectrum},
  };
  for (const auto& [a, sv] : cases) {
    const SnapshotMatrix s(a);
    for (Index k : {3, 8, 12}) {
      const PodResult p = pod_basis(s, 0.5 * (sv(k - 1) + sv(k)));
      ASSERT_EQ(p.k, k);
      const Matrix r = residual_matrix(p.basis, s.data());
      double tail = 0.0;
      for (Index j = p.k; j < sv.size(); ++j) tail += sv(j) * sv(j);
      EXPECT_LE(rel_diff(r.squaredNorm(), tail), 1e-10);
      EXPECT_LE(rel_diff(gram_two_norm(r), sv(p.k)), 1e-10);
    }
  }
}

TEST(Pod, NeverWorseThanGreedy) {
  const SnapshotMatrix s(decaying_matrix(40, 70, 0.7, 14));
  GreedyOptions o;
  o.tau = 1e-9;
  o.k_max = 40;
  const GreedyResult g = greedy_build(s, o);
  const SvdResult d = svd(s.data());
  for (Index k = 1; k <= g.state.size(); ++k) {
    const Matrix rg = residual_matrix(g.state.basis().leftCols(k), s.data());
    const Matrix rp = residual_matrix(d.v.leftCols(k), s.data());
    const double slack = 1e-12 * s.data().norm();
    EXPECT_LE(rp.norm(), rg.norm() + slack);
    EXPECT_LE(two_norm(rp), two_norm(rg) + slack);
  }
}

TEST(OptimalRrqr, DiagonalExample) {
  const SnapshotMatrix s(diag({3.0, 2.0, 1.0}));
  const Matrix q = optimal_rrqr(s, 2);
  EXPECT_NEAR(two_norm(residual_matrix(q, s.data())), 1.0, 1e-14);
}

TEST(OptimalRrqr, RandomMatchesNextSingularValue) {
  const SnapshotMatrix s(random_matrix(40, 60, 15));
  const Matrix q = optimal_rrqr(s, 10);
  EXPECT_LE(orthogonality_defect(q), 1e-13);
  const RealVector sv = gram_singular_values(s.data());
  EXPECT_LE(rel_diff(gram_two_norm(residual_matrix(q, s.data())), sv(10)), 1e-9);
}

TEST(OptimalRrqr, ExactRankReproduces) {
  const SnapshotMatrix s(rank_k_matrix(30, 50, 6, 16));
  const Matrix q = optimal_rrqr(s, 6);
  EXPECT_LE(gram_two_norm(residual_matrix(q, s.data())), 1e-10 * two_norm(s.data()));
  EXPECT_THROW(optimal_rrqr(s, 7), NumericalError);
  EXPECT_THROW(optimal_rrqr(s, 0), InputError);
}

TEST(Reconstruct, ExactRankThree) {
  const SnapshotMatrix s(rank_k_matrix(40, 30, 3, 17));
  const ReconstructionResult r = reconstruct_basis(s, 1e-12, 1e-12);
  EXPECT_EQ(r.j, 3);
  EXPECT_EQ(r.k, 3);
  EXPECT_TRUE(r.bracket_found);
  EXPECT_LE(orthogonality_defect(r.basis), 1e-13);
  const RealVector sv = jacobi_singular_values(s.data());
  for (Index j = 1; j <= 3; ++j) {
    const double err = gram_two_norm(residual_matrix(r.basis_of_dimension(j), s.data()));
    EXPECT_LE(std::abs(err - sv(j)), 1e-9 * sv(0)) << "j = " << j;
  }
}

TEST(Reconstruct, DiagonalExample) {
  const SnapshotMatrix s(diag({3.0, 2.0, 1.0, 0.0}));
  const ReconstructionResult r = reconstruct_basis(s, 1e-12, 1.5);
  EXPECT_EQ(r.j, 3);
  EXPECT_EQ(r.k, 2);
  EXPECT_NEAR(two_norm(residual_matrix(r.basis, s.data())), 1.0, 1e-14);
  EXPECT_NEAR(r.s1_sigma_next, 1.0, 1e-14);
  EXPECT_TRUE(r.tau_order_warning);  // tau2 > tau1
  EXPECT_FALSE(reconstruct_basis(s, 1e-2, 1e-3).tau_order_warning);
}

TEST(Reconstruct, NoBracketFallsBackToFullDepth) {
  const SnapshotMatrix s(diag({3.0, 2.0, 1.0}));
  const ReconstructionResult r = reconstruct_basis(s, 1e-12, 2.0);  // sigma_2 == tau2 exactly
  EXPECT_FALSE(r.bracket_found);
  EXPECT_EQ(r.k, r.j);
}

TEST(Reconstruct, SandwichOnDecayingSpectrum) {
  for (std::uint64_t seed : {18, 19}) {
    const SnapshotMatrix s(decaying_matrix(80, 60, 0.6, seed));
    const RealVector sv = gram_singular_values(s.data());
    const ReconstructionResult r = reconstruct_basis(s, 1e-6, 1e-6);
    ASSERT_GT(r.j, 0);
    const Matrix s1 = r.qr_basis * (r.qr_basis.adjoint() * s.data());
    const RealVector sv1 = gram_singular_values(s1);
    const double r22 = gram_two_norm(residual_matrix(r.qr_basis, s.data()));
    EXPECT_LE(rel_diff(r.r22_norm, r22), 1e-6);
    for (Index dim = 1; dim <= r.j; ++dim) {
      const double err = gram_two_norm(residual_matrix(r.basis_of_dimension(dim), s.data()));
      const double s1_next = dim < r.j ? sv1(dim) : 0.0;
      EXPECT_GE(err, sv(dim) - 1e-12) << "dim " << dim;
      EXPECT_LE(err, s1_next + r22 + 1e-12) << "dim " << dim;
      EXPECT_LE(err, r.upper_bound(dim) + 1e-12);
    }
  }
}

TEST(Reconstruct, BasisStaysOrthonormalOnIllConditionedInput) {
  const auto x = linspace(0.0, 10.0, 400);
  const SnapshotMatrix s =
      build_snapshot_matrix(ModelKind::damped_chirp, tensor_grid(linspace(1.0, 3.0, 12), linspace(0.0, 0.5, 8)), x);
  const ReconstructionResult r = reconstruct_basis(s, 1e-10, 1e-8);
  ASSERT_GT(r.j, 40);
  EXPECT_LE(orthogonality_defect(r.qr_basis), 1e-13);
  EXPECT_LE(orthogonality_defect(r.basis), 1e-13);
}
