#include <gtest/gtest.h>

#include <set>

#include "rbqr/eim.hpp"
#include "rbqr/greedy_qr.hpp"
#include "test_support.hpp"

using namespace rbqr;
using rbqr::testing::random_matrix;

namespace {

Matrix chirp_basis(SnapshotMatrix& s_out) {
  const auto x = linspace(0.0, 10.0, 800);
  s_out = build_snapshot_matrix(ModelKind::damped_chirp, tensor_grid(linspace(1.0, 3.0, 20), linspace(0.0, 0.5, 10)), x);
  GreedyOptions o;
  o.tau = 1e-8;
  o.k_max = 100;
  return greedy_build(s_out, o).state.basis();
}

}  // namespace

TEST(Eim, IdentityColumns) {
  const Matrix q = Matrix::Identity(6, 4);
  const EimOperator op = build_eim(q);
  EXPECT_EQ(op.nodes, (std::vector<Index>{0, 1, 2, 3}));
  EXPECT_EQ(op.node_matrix, Matrix::Identity(4, 4));
  EXPECT_DOUBLE_EQ(op.lebesgue, 1.0);
  EXPECT_DOUBLE_EQ(op.condition, 1.0);
}

TEST(Eim, SingleVector) {
  Matrix q(2, 1);
  q << 0.6, 0.8;
  EXPECT_EQ(build_eim(q).nodes, std::vector<Index>{1});
}

TEST(Eim, TieGoesToLowestRow) {
  Matrix q = Matrix::Constant(4, 1, Scalar(0.5));
  EXPECT_EQ(build_eim(q).nodes, std::vector<Index>{0});
}

TEST(Eim, ReproducesSpanAndZero) {
  SnapshotMatrix s;
  const Matrix q = chirp_basis(s);
  const EimOperator op = build_eim(q);
  EXPECT_EQ(std::set<Index>(op.nodes.begin(), op.nodes.end()).size(), op.nodes.size());
  for (Index j = 0; j < q.cols(); ++j) {
    const Vector back = eim_interpolate(op, q, op.sample(q.col(j)));
    EXPECT_LE((back - q.col(j)).norm(), 1e-12 * op.condition) << "j = " << j;
  }
  const Vector c = random_matrix(q.cols(), 1, 3).col(0);
  const Vector f = q * c;
  EXPECT_LE((eim_interpolate(op, q, op.sample(f)) - f).norm(), 1e-12 * op.condition * f.norm());
  EXPECT_EQ(eim_interpolate(op, q, Vector::Zero(q.cols())), Vector::Zero(q.rows()));
  // the factorization solves the node system to roundoff
  const Vector rhs = random_matrix(q.cols(), 1, 4).col(0);
  EXPECT_LE((op.node_matrix * op.lu.solve(rhs) - rhs).norm(), 1e-12 * op.condition * rhs.norm());
}

TEST(Eim, TrainingColumnsWithinLebesgueBound) {
  SnapshotMatrix s;
  const Matrix q = chirp_basis(s);
  const EimOperator op = build_eim(q);
  double worst = 0.0;
  for (Index i = 0; i < s.cols(); ++i) {
    const Vector f = s.col(i);
    worst = std::max(worst, (eim_interpolate(op, q, op.sample(f)) - f).norm());
  }
  // ||f - I f|| <= (1 + Lambda) ||f - P f|| <= (1 + Lambda) tau
  EXPECT_LE(worst, (1.0 + op.lebesgue) * 1e-8);
}

TEST(Eim, Errors) {
  EXPECT_THROW(build_eim(Matrix(4, 0)), InputError);
  EXPECT_THROW(build_eim(random_matrix(5, 2, 1)), InputError);  // not orthonormal
  EXPECT_THROW(build_eim(Matrix::Identity(2, 3)), InputError);   // k > N
  const Matrix q = Matrix::Identity(3, 2);
  const EimOperator op = build_eim(q);
  EXPECT_THROW(eim_interpolate(op, q, Vector::Zero(3)), DimensionError);
  EXPECT_THROW(eim_interpolate(op, Matrix::Identity(3, 3), Vector::Zero(2)), DimensionError);
}

TEST(Eim, SecondNodeFromResidual) {
  Matrix q = Matrix::Zero(4, 2);
  const double h = 1.0 / std::sqrt(2.0);
  q(0, 0) = h;
  q(1, 0) = h;
  q(0, 1) = h;
  q(1, 1) = -h;
  // node 0 is row 0; the residual of q_1 after interpolating at row 0 lives on row 1
  const EimOperator op = build_eim(q);
  EXPECT_EQ(op.nodes, (std::vector<Index>{0, 1}));
}
