#include <gtest/gtest.h>

#include <fstream>

#include "rbqr/bench.hpp"
#include "test_support.hpp"

using namespace rbqr;
using rbqr::testing::scratch_dir;

TEST(BenchMath, Median) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
  EXPECT_TRUE(std::isnan(median({})));
}

TEST(BenchMath, LinearFit) {
  EXPECT_NEAR(linear_fit_r2({1, 2, 3, 4}, {3, 5, 7, 9}), 1.0, 1e-15);
  EXPECT_LT(linear_fit_r2({1, 2, 3, 4}, {1, -1, 1, -1}), 0.5);
  EXPECT_THROW(linear_fit_r2({1}, {1}), InputError);
}

TEST(BenchMath, TimingIdentity) {
  std::vector<IterationTiming> t = {{0.5, 0.5, 1.0}, {0.3, 0.6, 1.0}};
  EXPECT_NEAR(timing_identity_violation(t), 0.1, 1e-15);
}

TEST(StrongScaling, SingleWorkerIsUnitEfficiency) {
  const SnapshotMatrix s(random_gaussian_matrix(300, 400, 1));
  const ScalingTable t = strong_scaling(s, 20, {1, 2, 4});
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[0].efficiency, 1.0);
  EXPECT_EQ(t.rows[0].speedup, 1.0);
  EXPECT_EQ(t.rows[0].predicted_efficiency, 1.0);
  for (const auto& r : t.rows) {
    EXPECT_EQ(r.k, 20);
    EXPECT_GT(r.t_pivot_c, 0.0);
    EXPECT_NEAR(r.speedup, r.workers * r.efficiency, 1e-12);
    EXPECT_LE(r.predicted_efficiency, 1.0);
  }
  const double nu = t.rows[2].mean_sweeps;
  EXPECT_NEAR(t.rows[2].predicted_efficiency, 1.0 - nu * 20 * 3 / (2.0 * 400), 1e-12);
  EXPECT_EQ(t.iterations.size(), 60u);
  EXPECT_LE(t.worst_identity_violation(), 0.01);
  EXPECT_NE(t.summary().find("E_C"), std::string::npos);
}

TEST(StrongScaling, WorkerCountsValidated) {
  const SnapshotMatrix s(random_gaussian_matrix(20, 30, 2));
  EXPECT_THROW(strong_scaling(s, 5, {2, 4}), InputError);
  EXPECT_THROW(strong_scaling(s, 5, {1, 4, 2}), InputError);
  EXPECT_THROW(strong_scaling(s, 5, {}), InputError);
}

TEST(WeakScaling, ColumnsGrowWithWorkers) {
  const ScalingTable t = weak_scaling(200, 50, 10, {1, 2, 4});
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[0].m, 50);
  EXPECT_EQ(t.rows[2].m, 200);
  for (const auto& r : t.rows) EXPECT_NEAR(r.scaled_total, r.total_seconds / 10.0, 1e-15);
}

TEST(BenchCsv, Columns) {
  const auto dir = scratch_dir("bench_csv");
  write_timings_csv((dir / "t.csv").string(), {{2, 0, {0.1, 0.2, 0.3}}, {2, 1, {0.4, 0.5, 0.9}}});
  std::ifstream in(dir / "t.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "C,j,t_pivot_c,t_imgs,t_total");
  EXPECT_EQ(row.substr(0, 4), "2,0,");
}
