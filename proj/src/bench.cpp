#include "rbqr/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "rbqr/models.hpp"

namespace rbqr {

namespace {

// Small enough that k_max, not the tolerance, ends every benchmark run.
constexpr double kBenchTau = 1e-12;

void check_counts(const std::vector<int>& counts) {
  if (counts.empty() || counts.front() != 1) throw InputError("bench: worker counts must start at 1");
  for (std::size_t i = 1; i < counts.size(); ++i)
    if (!(counts[i] > counts[i - 1])) throw InputError("bench: worker counts must be strictly ascending");
}

GreedyResult timed_run(const SnapshotMatrix& s, Index k, int workers) {
  GreedyOptions opt;
  opt.tau = kBenchTau;
  opt.k_max = k;
  opt.workers = workers;
  GreedyResult r{make_greedy_state(s), {}};
  r.report.timings.reserve(static_cast<std::size_t>(k));
  r.report.sigma_hat.reserve(static_cast<std::size_t>(k));
  r.report.pivots.reserve(static_cast<std::size_t>(k));
  r.report.sweeps.reserve(static_cast<std::size_t>(k));
  greedy_resume(s, r.state, r.report, opt);
  return r;
}

bool identical(const GreedyResult& a, const GreedyResult& b) {
  if (a.state.pivots != b.state.pivots) return false;
  const auto qa = a.state.basis();
  const auto qb = b.state.basis();
  if (qa.rows() != qb.rows() || qa.cols() != qb.cols()) return false;
  return std::memcmp(qa.data(), qb.data(), sizeof(Scalar) * static_cast<std::size_t>(qa.size())) == 0;
}

ScalingRow summarize(const GreedyResult& r, int workers, Index m) {
  const auto& t = r.report.timings;
  ScalingRow row;
  row.workers = workers;
  row.m = m;
  row.k = static_cast<Index>(t.size());
  const std::size_t skip = t.size() > static_cast<std::size_t>(kWarmupIterations) ? kWarmupIterations : 0;
  std::vector<double> pc, im, tt, j_fit, imgs_fit;
  for (std::size_t j = 0; j < t.size(); ++j) {
    row.total_seconds += t[j].t_total;
    if (j >= 10) {
      j_fit.push_back(static_cast<double>(j));
      imgs_fit.push_back(t[j].t_imgs);
    }
    if (j < skip) continue;
    pc.push_back(t[j].t_pivot_c);
    im.push_back(t[j].t_imgs);
    tt.push_back(t[j].t_total);
  }
  row.t_pivot_c = median(pc);
  row.t_imgs = median(im);
  row.t_total = median(tt);
  row.scaled_total = row.k > 0 ? row.total_seconds / static_cast<double>(row.k) : 0.0;
  if (!pc.empty()) {
    const auto [lo, hi] = std::minmax_element(pc.begin(), pc.end());
    row.pivot_spread = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
  }
  row.imgs_r2 = j_fit.size() >= 3 ? linear_fit_r2(j_fit, imgs_fit) : std::numeric_limits<double>::quiet_NaN();
  row.identity_violation = timing_identity_violation(t);
  const auto& sw = r.report.sweeps;
  row.mean_sweeps = sw.empty() ? 0.0 : std::accumulate(sw.begin(), sw.end(), 0.0) / static_cast<double>(sw.size());
  row.predicted_efficiency =
      1.0 - row.mean_sweeps * static_cast<double>(row.k) * (workers - 1) / (2.0 * static_cast<double>(m));
  return row;
}

void append_iterations(ScalingTable& table, const GreedyResult& r, int workers) {
  for (std::size_t j = 0; j < r.report.timings.size(); ++j)
    table.iterations.push_back({workers, static_cast<Index>(j), r.report.timings[j]});
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

double linear_fit_r2(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("linear_fit_r2: need two or more paired samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return syy == 0.0 ? 1.0 : 0.0;
  return (sxy * sxy) / (sxx * syy);
}

double timing_identity_violation(const std::vector<IterationTiming>& timings) {
  double worst = 0.0;
  for (const auto& t : timings) {
    if (t.t_total <= 0.0) continue;
    worst = std::max(worst, std::abs(t.t_total - (t.t_pivot_c + t.t_imgs)) / t.t_total);
  }
  return worst;
}

double ScalingTable::worst_identity_violation() const {
  double w = 0.0;
  for (const auto& r : rows) w = std::max(w, r.identity_violation);
  return w;
}

std::string ScalingTable::summary() const {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%4s %7s %5s %12s %12s %12s %10s %9s %9s %9s %8s\n", "C", "M", "k", "t_pivot_c",
                "t_imgs", "t_total/k", "E_C", "S_C", "E_pred", "ident", "R2_imgs");
  os << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%4d %7lld %5lld %12.4e %12.4e %12.4e %10.4f %9.3f %9.4f %9.2e %8.4f\n", r.workers,
                  static_cast<long long>(r.m), static_cast<long long>(r.k), r.t_pivot_c, r.t_imgs, r.scaled_total,
                  r.efficiency, r.speedup, r.predicted_efficiency, r.identity_violation, r.imgs_r2);
    os << buf;
  }
  return os.str();
}

ScalingTable strong_scaling(const SnapshotMatrix& s, Index k, const std::vector<int>& worker_counts) {
  check_counts(worker_counts);
  std::vector<GreedyResult> runs;
  runs.reserve(worker_counts.size());
  for (int c : worker_counts) {
    runs.push_back(timed_run(s, k, c));
    if (!identical(runs.front(), runs.back())) {
      throw DeterminismError("strong_scaling: run with " + std::to_string(c) +
                             " workers differs from the single-worker run");
    }
  }
  ScalingTable table;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    ScalingRow row = summarize(runs[i], worker_counts[i], s.cols());
    if (i > 0 && row.t_pivot_c > 0.0) {
      row.efficiency = table.rows.front().t_pivot_c / (worker_counts[i] * row.t_pivot_c);
      row.speedup = worker_counts[i] * row.efficiency;
    }
    table.rows.push_back(row);
    append_iterations(table, runs[i], worker_counts[i]);
  }
  return table;
}

ScalingTable weak_scaling(Index n, Index cols_per_worker, Index k, const std::vector<int>& worker_counts,
                          std::uint64_t seed, bool verify) {
  check_counts(worker_counts);
  if (n < 1 || cols_per_worker < 1) throw InputError("weak_scaling: sizes must be positive");
  ScalingTable table;
  for (int c : worker_counts) {
    const Index m = cols_per_worker * c;
    const SnapshotMatrix s(random_gaussian_matrix(n, m, seed + static_cast<std::uint64_t>(c)));
    const Index kk = std::min(k, std::min(n, m));
    GreedyResult run = timed_run(s, kk, c);
    if (verify && c > 1 && !identical(timed_run(s, kk, 1), run)) {
      throw DeterminismError("weak_scaling: run with " + std::to_string(c) + " workers differs from one worker");
    }
    ScalingRow row = summarize(run, c, m);
    if (!table.rows.empty() && row.scaled_total > 0.0) {
      row.efficiency = table.rows.front().scaled_total / row.scaled_total;
      row.speedup = c * row.efficiency;
    }
    table.rows.push_back(row);
    append_iterations(table, run, c);
  }
  return table;
}

void write_timings_csv(const std::string& path, const std::vector<IterationRecord>& iterations) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << "C,j,t_pivot_c,t_imgs,t_total\n";
  char buf[160];
  for (const auto& r : iterations) {
    std::snprintf(buf, sizeof buf, "%d,%lld,%.9e,%.9e,%.9e\n", r.workers, static_cast<long long>(r.j),
                  r.timing.t_pivot_c, r.timing.t_imgs, r.timing.t_total);
    out << buf;
  }
}

}  // namespace rbqr
