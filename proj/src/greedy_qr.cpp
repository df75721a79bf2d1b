#include "rbqr/greedy_qr.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "rbqr/orthogonalization.hpp"

namespace rbqr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds(Clock::time_point a, Clock::time_point b) { return std::chrono::duration<double>(b - a).count(); }

// Running argmax with the lowest-index tie-break.
struct LocalBest {
  Index index = -1;
  double value = -1.0;

  void offer(Index i, double v) {
    if (v > value) {
      value = v;
      index = i;
    }
  }
};

PivotResult reduce(std::span<const LocalBest> locals) {
  LocalBest best;
  for (const auto& l : locals) {
    if (l.index < 0) continue;
    if (l.value > best.value || (l.value == best.value && l.index < best.index)) best = l;
  }
  if (best.index < 0) return {};
  return {best.index, best.value};
}

LocalBest scan_range(const GreedyState& st, ColumnRange range) {
  LocalBest b;
  for (Index i = range.begin; i < range.end; ++i) b.offer(i, residual_sq(st, i));
  return b;
}

// Residual of column i recomputed from its first `depth` R entries.
double direct_residual_sq(const GreedyState& st, const SnapshotMatrix& s, Index i, Index depth) {
  Vector coeffs(depth);
  for (Index j = 0; j < depth; ++j) coeffs(j) = st.r(j, i);
  Vector resid = s.col(i);
  resid.noalias() -= st.q.leftCols(depth) * coeffs;
  return resid.squaredNorm();
}

void validate_options(const SnapshotMatrix& s, const GreedyOptions& opt) {
  if (!(opt.tau > 1e3 * kEpsilon)) throw InputError("greedy: tau must exceed 1e3 * machine epsilon");
  if (opt.workers < 1) throw InputError("greedy: workers must be >= 1");
  if (opt.k_max < 1 || opt.k_max > std::min(s.rows(), s.cols())) {
    throw InputError("greedy: k_max must lie in [1, min(N, M)] = [1, " + std::to_string(std::min(s.rows(), s.cols())) +
                     "], got " + std::to_string(opt.k_max));
  }
}

}  // namespace

const char* to_string(GreedyStatus status) {
  switch (status) {
    case GreedyStatus::tolerance_reached: return "tolerance_reached";
    case GreedyStatus::k_max_reached: return "k_max_reached";
    case GreedyStatus::rank_exhausted: return "rank_exhausted";
  }
  return "unknown";
}

void GreedyState::reserve(Index capacity) {
  if (capacity <= q.cols()) return;
  q.conservativeResize(q.rows(), capacity);
  r.conservativeResize(capacity, r.cols());
}

GreedyState make_greedy_state(const SnapshotMatrix& s) {
  GreedyState st;
  st.q.resize(s.rows(), 0);
  st.r.resize(0, s.cols());
  st.norms_sq.assign(s.col_norms_sq().begin(), s.col_norms_sq().end());
  st.base_sq = st.norms_sq;
  st.acc.assign(st.norms_sq.size(), 0.0);
  st.selected.assign(st.norms_sq.size(), 0);
  return st;
}

double residual_sq(const GreedyState& st, Index i) {
  const auto u = static_cast<std::size_t>(i);
  if (st.selected[u]) return 0.0;
  return std::max(st.base_sq[u] - st.acc[u], 0.0);
}

PivotResult pivot_search(const GreedyState& st, std::span<const ColumnRange> partition) {
  check_partition(partition, st.cols());
  std::vector<LocalBest> locals(partition.size());
  parallel_for_ranges(partition, [&](int w, ColumnRange range) { locals[static_cast<std::size_t>(w)] = scan_range(st, range); });
  return reduce(locals);
}

void extend_columns(GreedyState& st, const SnapshotMatrix& s) {
  const Index old_m = st.cols();
  const Index new_m = s.cols();
  if (s.rows() != st.rows()) throw DimensionError("extend_columns: row count mismatch");
  if (new_m < old_m) throw DimensionError("extend_columns: matrix has fewer columns than the state");
  if (new_m == old_m) return;

  st.r.conservativeResize(st.r.rows(), new_m);
  const Index k = st.size();
  for (Index i = old_m; i < new_m; ++i) {
    for (Index j = 0; j < k; ++j) st.r(j, i) = st.q.col(j).dot(s.col(i));
    for (Index j = k; j < st.r.rows(); ++j) st.r(j, i) = Scalar(0.0);
    const double nrm = s.column_norm_sq(i);
    st.norms_sq.push_back(nrm);
    st.base_sq.push_back(k > 0 ? direct_residual_sq(st, s, i, k) : nrm);
    st.acc.push_back(0.0);
    st.selected.push_back(0);
  }
}

void greedy_resume(const SnapshotMatrix& s, GreedyState& st, GreedyReport& rep, const GreedyOptions& opt) {
  validate_options(s, opt);
  if (st.cols() != s.cols() || st.rows() != s.rows()) throw DimensionError("greedy: state does not match the matrix");
  st.reserve(opt.k_max);

  const Index n = s.rows();
  const Index m = s.cols();
  const auto partition = make_partition(m, opt.workers);
  WorkerTeam team(opt.workers);
  std::vector<LocalBest> locals(partition.size());
  std::vector<std::uint64_t> rebase_counts(partition.size(), 0);
  std::vector<std::uint64_t> rebase_flops(partition.size(), 0);

  const auto setup0 = Clock::now();
  PivotResult best;
  team.run([&](int w) { locals[static_cast<std::size_t>(w)] = scan_range(st, partition[static_cast<std::size_t>(w)]); });
  best = reduce(locals);
  rep.setup_seconds += seconds(setup0, Clock::now());

  // Searcher w: fold basis vector j into the residuals of its columns and
  // report its local argmax.
  Index current = 0;
  const std::function<void(int)> search = [&](int w) {
    const auto uw = static_cast<std::size_t>(w);
    const ColumnRange range = partition[uw];
    const Index j = current;
    const auto qj = st.q.col(j);
    LocalBest b;
    std::uint64_t rebases = 0, extra = 0;
    for (Index i = range.begin; i < range.end; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const Scalar c = qj.dot(s.col(i));
      st.r(j, i) = c;
      if (st.selected[ui]) {
        b.offer(i, 0.0);
        continue;
      }
      st.acc[ui] += std::norm(c);
      double res = st.base_sq[ui] - st.acc[ui];
      if (res < kRebaseRatio * st.base_sq[ui] && st.base_sq[ui] > kRebaseFloor * st.norms_sq[ui]) {
        st.base_sq[ui] = direct_residual_sq(st, s, i, j + 1);
        st.acc[ui] = 0.0;
        res = st.base_sq[ui];
        ++rebases;
        extra += static_cast<std::uint64_t>(2 * n * (j + 2));
      }
      b.offer(i, std::max(res, 0.0));
    }
    locals[uw] = b;
    rebase_counts[uw] = rebases;
    rebase_flops[uw] = extra;
  };

  const double tau_sq = opt.tau * opt.tau;
  for (;;) {
    if (best.value < tau_sq) {
      rep.status = GreedyStatus::tolerance_reached;
      break;
    }
    if (st.size() >= opt.k_max) {
      rep.status = GreedyStatus::k_max_reached;
      break;
    }

    const auto t0 = Clock::now();
    const Index k = st.size();
    const Index p = best.index;
    OrthoResult o;
    try {
      o = imgs_orthogonalize(st.basis(), s.col(p), opt.kappa);
    } catch (const DegenerateCandidate&) {
      rep.status = GreedyStatus::rank_exhausted;
      break;
    }
    st.q.col(k) = o.q;
    for (Index j = 0; j < k; ++j) st.r(j, p) = o.coeffs(j);
    st.pivots.push_back(p);
    st.selected[static_cast<std::size_t>(p)] = 1;
    const auto t1 = Clock::now();

    current = k;
    std::fill(rebase_counts.begin(), rebase_counts.end(), 0);
    std::fill(rebase_flops.begin(), rebase_flops.end(), 0);
    team.run(search);
    const PivotResult next = reduce(locals);
    st.r(k, p) = Scalar(o.residual_norm);
    const auto t2 = Clock::now();

    rep.sigma_hat.push_back(std::sqrt(best.value));
    rep.pivots.push_back(p);
    rep.sweeps.push_back(o.sweeps);
    rep.flops.pivot += static_cast<std::uint64_t>(2 * n * m);
    for (std::size_t w = 0; w < partition.size(); ++w) {
      rep.flops.pivot += rebase_flops[w];
      rep.rebases += rebase_counts[w];
    }
    rep.flops.ortho += static_cast<std::uint64_t>(o.sweeps * k * n + n);
    best = next;
    const auto t3 = Clock::now();
    rep.timings.push_back({seconds(t1, t2), seconds(t0, t1), seconds(t0, t3)});

    if (opt.on_iteration) opt.on_iteration(st, rep);
  }
  rep.final_error = std::sqrt(best.value);
}

GreedyResult greedy_build(const SnapshotMatrix& s, const GreedyOptions& options) {
  validate_options(s, options);
  GreedyResult out{make_greedy_state(s), {}};
  greedy_resume(s, out.state, out.report, options);
  return out;
}

FlopEstimate flop_estimate(double n, double m, double k, double nu_hat) {
  return {2.0 * m * n * k, 0.5 * nu_hat * n * k * (k + 1.0)};
}

double mgs_flop_count(double k, double n, double m) { return 6.0 * k * n * m - 3.0 * n * k * k; }

double naive_greedy_flop_count(double k, double n, double m) { return 1.5 * k * k * n * m; }

}  // namespace rbqr
