#include <gtest/gtest.h>

#include <cstring>
#include <fstream>
#include <limits>

#include "rbqr/npy.hpp"
#include "rbqr/snapshot_io.hpp"
#include "rbqr/snapshot_matrix.hpp"
#include "test_support.hpp"

using namespace rbqr;
using rbqr::testing::random_matrix;
using rbqr::testing::scratch_dir;

namespace {

void write_raw_npy(const std::filesystem::path& path, const std::string& header_dict, int major,
                   const std::vector<double>& payload) {
  std::string header = header_dict;
  const std::size_t prefix = major == 1 ? 10 : 12;
  while ((prefix + header.size() + 1) % 64 != 0) header += ' ';
  header += '\n';
  std::ofstream out(path, std::ios::binary);
  out.write("\x93NUMPY", 6);
  out.put(static_cast<char>(major));
  out.put(0);
  if (major == 1) {
    const auto len = static_cast<std::uint16_t>(header.size());
    out.write(reinterpret_cast<const char*>(&len), 2);
  } else {
    const auto len = static_cast<std::uint32_t>(header.size());
    out.write(reinterpret_cast<const char*>(&len), 4);
  }
  out << header;
  out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size() * 8));
}

}  // namespace

TEST(SnapshotMatrix, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(SnapshotMatrix(Matrix(0, 3)), InputError);
  EXPECT_THROW(SnapshotMatrix(Matrix(3, 0)), InputError);
  Matrix a = Matrix::Ones(3, 2);
  a(2, 1) = Scalar(std::numeric_limits<double>::quiet_NaN(), 0.0);
  try {
    SnapshotMatrix s(a);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("non-finite entry at (2, 1)"), std::string::npos) << e.what();
  }
  a(2, 1) = Scalar(0.0, std::numeric_limits<double>::infinity());
  EXPECT_THROW(SnapshotMatrix{a}, InputError);
}

TEST(SnapshotMatrix, ColumnNormExamples) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(0, 1) = 3.0;
  a(1, 1) = Scalar(0.0, 4.0);
  const SnapshotMatrix s(a);
  EXPECT_EQ(column_norm_sq(s, 0), 1.0);
  EXPECT_EQ(column_norm_sq(s, 1), 25.0);
  EXPECT_THROW(s.column_norm_sq(2), std::out_of_range);
  EXPECT_THROW(s.column_norm_sq(-1), std::out_of_range);
}

TEST(SnapshotMatrix, CachedNormsMatchDirectSummation) {
  const SnapshotMatrix s(random_matrix(137, 40, 7));
  for (Index i = 0; i < s.cols(); ++i) {
    double direct = 0.0;
    for (Index r = 0; r < s.rows(); ++r) direct += s.data()(r, i).real() * s.data()(r, i).real() +
                                                   s.data()(r, i).imag() * s.data()(r, i).imag();
    EXPECT_LE(std::abs(s.column_norm_sq(i) - direct), 1e-14 * direct);
  }
}

TEST(SnapshotMatrix, AppendAndSelect) {
  const SnapshotMatrix s(random_matrix(5, 3, 1));
  const Matrix extra = random_matrix(5, 2, 2);
  const SnapshotMatrix t = s.with_appended(extra);
  ASSERT_EQ(t.cols(), 5);
  EXPECT_EQ(t.data().leftCols(3), s.data());
  EXPECT_EQ(t.data().rightCols(2), extra);
  EXPECT_EQ(t.column_norm_sq(4), extra.col(1).squaredNorm());
  EXPECT_THROW(s.with_appended(random_matrix(4, 1, 3)), DimensionError);
  const std::vector<Index> pick = {2, 0};
  const SnapshotMatrix u = s.select_columns(pick);
  EXPECT_EQ(u.data().col(0), s.data().col(2));
  EXPECT_EQ(u.data().col(1), s.data().col(0));
}

TEST(Permutation, BijectionAndInverse) {
  const Permutation p({2, 0, 1});
  EXPECT_EQ(p[0], 2);
  const auto inv = p.inverse();
  for (Index i = 0; i < 3; ++i) EXPECT_EQ(p[inv[static_cast<std::size_t>(i)]], i);
  EXPECT_THROW(Permutation({0, 0, 1}), InputError);
  EXPECT_THROW(Permutation({0, 3, 1}), InputError);
  EXPECT_EQ(Permutation::identity(4).order(), (std::vector<Index>{0, 1, 2, 3}));
}

TEST(Permutation, CompletionKeepsPrefixThenAscending) {
  const std::vector<Index> prefix = {3, 1};
  EXPECT_EQ(complete_permutation(prefix, 5).order(), (std::vector<Index>{3, 1, 0, 2, 4}));
  const std::vector<Index> bad = {1, 1};
  EXPECT_THROW(complete_permutation(bad, 3), InputError);
}

TEST(SnapshotIo, NpyShapeIsSnapshotsByGridPoints) {
  const auto dir = scratch_dir("npy_shape");
  std::vector<double> payload;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) {
      payload.push_back(10.0 * i + j);
      payload.push_back(-j);
    }
  write_raw_npy(dir / "a.npy", "{'descr': '<c16', 'fortran_order': False, 'shape': (3, 4), }", 1, payload);
  const SnapshotMatrix s = load_snapshots(dir / "a.npy", SnapshotFormat::npy);
  EXPECT_EQ(s.rows(), 4);
  EXPECT_EQ(s.cols(), 3);
  EXPECT_EQ(s.data()(1, 2), Scalar(21.0, -1.0));
}

TEST(SnapshotIo, NpyVersion2AndRealPromotion) {
  const auto dir = scratch_dir("npy_v2");
  write_raw_npy(dir / "r.npy", "{'descr': '<f8', 'fortran_order': False, 'shape': (2, 3), }", 2,
                {1, 2, 3, 4, 5, 6});
  const SnapshotMatrix s = load_snapshots(dir / "r.npy", SnapshotFormat::npy);
  EXPECT_EQ(s.rows(), 3);
  EXPECT_EQ(s.cols(), 2);
  EXPECT_EQ(s.data()(2, 1), Scalar(6.0, 0.0));
}

TEST(SnapshotIo, NpyFortranOrderIsHonoured) {
  const auto dir = scratch_dir("npy_fortran");
  // (M, N) = (2, 3) stored column-major: item (snap, g) at g * 2 + snap
  write_raw_npy(dir / "f.npy", "{'descr': '<f8', 'fortran_order': True, 'shape': (2, 3), }", 1, {1, 2, 3, 4, 5, 6});
  const SnapshotMatrix s = load_snapshots(dir / "f.npy", SnapshotFormat::npy);
  EXPECT_EQ(s.data()(0, 1), Scalar(2.0, 0.0));
  EXPECT_EQ(s.data()(2, 0), Scalar(5.0, 0.0));
}

TEST(SnapshotIo, NpyNaNReportsPosition) {
  const auto dir = scratch_dir("npy_nan");
  write_raw_npy(dir / "n.npy", "{'descr': '<f8', 'fortran_order': False, 'shape': (2, 2), }", 1,
                {1, 2, std::numeric_limits<double>::quiet_NaN(), 4});
  try {
    load_snapshots(dir / "n.npy", SnapshotFormat::npy);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("non-finite entry at (0, 1)"), std::string::npos) << msg;
    EXPECT_NE(msg.find("byte offset 144"), std::string::npos) << msg;
  }
}

TEST(SnapshotIo, NpyMalformedHeaders) {
  const auto dir = scratch_dir("npy_bad");
  write_raw_npy(dir / "f.npy", "{'descr': '<c16', 'fortran_order': maybe, 'shape': (1, 1), }", 1, {1, 2});
  EXPECT_THROW(load_snapshots(dir / "f.npy", SnapshotFormat::npy), InputError);
  write_raw_npy(dir / "k.npy", "{'descr': '<c16', 'fortran_order': False, 'shape': (1, 1), 'x': 1, }", 1, {1, 2});
  EXPECT_THROW(load_snapshots(dir / "k.npy", SnapshotFormat::npy), InputError);
  write_raw_npy(dir / "d.npy", "{'descr': '<f4', 'fortran_order': False, 'shape': (1, 2), }", 1, {1});
  EXPECT_THROW(load_snapshots(dir / "d.npy", SnapshotFormat::npy), InputError);
  write_raw_npy(dir / "z.npy", "{'descr': '<c16', 'fortran_order': False, 'shape': (0, 3), }", 1, {});
  EXPECT_THROW(load_snapshots(dir / "z.npy", SnapshotFormat::npy), InputError);
  write_raw_npy(dir / "t.npy", "{'descr': '<c16', 'fortran_order': False, 'shape': (2, 3), }", 1, {1, 2});
  EXPECT_THROW(load_snapshots(dir / "t.npy", SnapshotFormat::npy), InputError);
  std::ofstream(dir / "m.npy") << "not an npy file at all";
  EXPECT_THROW(load_snapshots(dir / "m.npy", SnapshotFormat::npy), InputError);
  EXPECT_THROW(load_snapshots(dir / "missing.npy", SnapshotFormat::npy), InputError);
}

TEST(SnapshotIo, TextFormat) {
  const auto dir = scratch_dir("text");
  std::ofstream(dir / "s.txt") << "# two snapshots\n1 0 2 0 3 -1\n\n4 1 5 1 6 1\n";
  const SnapshotMatrix s = load_snapshots(dir / "s.txt", SnapshotFormat::text);
  EXPECT_EQ(s.rows(), 3);
  EXPECT_EQ(s.cols(), 2);
  EXPECT_EQ(s.data()(2, 0), Scalar(3.0, -1.0));
  EXPECT_EQ(s.data()(0, 1), Scalar(4.0, 1.0));

  std::ofstream(dir / "odd.txt") << "1 2 3\n";
  EXPECT_THROW(load_snapshots(dir / "odd.txt", SnapshotFormat::text), InputError);
  std::ofstream(dir / "ragged.txt") << "1 2 3 4\n1 2\n";
  try {
    load_snapshots(dir / "ragged.txt", SnapshotFormat::text);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  std::ofstream(dir / "nan.txt") << "1 2 nan 4\n";
  EXPECT_THROW(load_snapshots(dir / "nan.txt", SnapshotFormat::text), InputError);
}

TEST(SnapshotIo, RoundTripIsBitExact) {
  const auto dir = scratch_dir("roundtrip");
  Matrix a = random_matrix(17, 9, 3);
  a(0, 0) = Scalar(1.0 / 3.0, -std::numeric_limits<double>::denorm_min());
  for (auto fmt : {SnapshotFormat::npy, SnapshotFormat::text}) {
    const auto path = dir / (fmt == SnapshotFormat::npy ? "a.npy" : "a.txt");
    save_snapshots(path, a, fmt);
    const SnapshotMatrix b = load_snapshots(path, fmt);
    ASSERT_EQ(b.rows(), a.rows());
    ASSERT_EQ(b.cols(), a.cols());
    EXPECT_EQ(std::memcmp(a.data(), b.data().data(), sizeof(Scalar) * static_cast<std::size_t>(a.size())), 0);
  }
  const std::vector<Index> idx = {5, 0, 1234567890123LL};
  const std::vector<double> vals = {0.1, -2.5e-300, 7.0};
  for (auto fmt : {SnapshotFormat::npy, SnapshotFormat::text}) {
    const auto tag = std::string(fmt == SnapshotFormat::npy ? ".npy" : ".txt");
    save_indices(dir / ("i" + tag), idx, fmt);
    EXPECT_EQ(load_indices(dir / ("i" + tag), fmt), idx);
    save_reals(dir / ("r" + tag), vals, fmt);
    EXPECT_EQ(load_reals(dir / ("r" + tag), fmt), vals);
  }
  const Matrix r = random_matrix(4, 6, 9);
  save_dense_npy(dir / "r.npy", r);
  EXPECT_EQ(load_dense_npy(dir / "r.npy"), r);
}

TEST(SnapshotIo, NpyHeaderIsAlignedVersion1) {
  const auto dir = scratch_dir("header");
  save_snapshots(dir / "h.npy", random_matrix(3, 2, 1), SnapshotFormat::npy);
  std::ifstream in(dir / "h.npy", std::ios::binary);
  char head[10];
  in.read(head, 10);
  EXPECT_EQ(std::string(head + 1, 5), "NUMPY");
  EXPECT_EQ(head[6], 1);
  EXPECT_EQ(head[7], 0);
  std::uint16_t len = 0;
  std::memcpy(&len, head + 8, 2);
  EXPECT_EQ((10 + len) % 64, 0);
  std::string header(len, ' ');
  in.read(header.data(), len);
  EXPECT_NE(header.find("'shape': (2, 3)"), std::string::npos) << header;
  EXPECT_NE(header.find("'fortran_order': False"), std::string::npos);
}

TEST(SnapshotIo, FormatNames) {
  EXPECT_EQ(parse_format("npy"), SnapshotFormat::npy);
  EXPECT_EQ(parse_format("text"), SnapshotFormat::text);
  EXPECT_THROW(parse_format("gsl"), InputError);
}
