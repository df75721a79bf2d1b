#include "rbqr/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>
#include <vector>

#include "rbqr/bench.hpp"
#include "rbqr/eim.hpp"
#include "rbqr/error_estimators.hpp"
#include "rbqr/greedy_qr.hpp"
#include "rbqr/mgs_pivoted_qr.hpp"
#include "rbqr/models.hpp"
#include "rbqr/orthogonalization.hpp"
#include "rbqr/snapshot_io.hpp"
#include "rbqr/svd_suite.hpp"

namespace rbqr::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

// Ordered key=value report, written as report.kv and echoed into report.txt.
class Report {
 public:
  void add(const std::string& key, const std::string& value) { kv_.emplace_back(key, value); }
  void add(const std::string& key, double value) { add(key, fmt(value)); }
  void add(const std::string& key, long long value) { add(key, std::to_string(value)); }
  void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
  void text(const std::string& block) { text_ += block; }

  void write(const fs::path& dir, const std::string& title) const {
    std::ofstream kv(dir / "report.kv");
    for (const auto& [k, v] : kv_) kv << k << "=" << v << "\n";
    std::ofstream txt(dir / "report.txt");
    txt << title << "\n\n";
    for (const auto& [k, v] : kv_) txt << "  " << k << ": " << v << "\n";
    if (!text_.empty()) txt << "\n" << text_;
    if (!kv || !txt) throw InputError("cannot write report files in '" + dir.string() + "'");
  }

 private:
  std::vector<std::pair<std::string, std::string>> kv_;
  std::string text_;
};

struct Context {
  const Config& cfg;
  fs::path dir;
  bool quiet;
  std::ostream& log;
  int workers;
  bool want_npy = true;
  bool want_text = true;

  void say(const std::string& line) const {
    if (!quiet) log << line << "\n";
  }
};

std::vector<double> x_grid(const Config& c) {
  return linspace(c.get_double("model.x_min"), c.get_double("model.x_max"), c.get_int("model.x_points"));
}

std::vector<ParamTuple> model_params(const Config& c, const std::string& param_file, long long density) {
  if (!param_file.empty()) return load_parameter_file(param_file);
  const auto a = linspace(c.get_double("model.p1_min"), c.get_double("model.p1_max"),
                          c.get_int("model.p1_points") * density);
  const auto b = linspace(c.get_double("model.p2_min"), c.get_double("model.p2_max"),
                          c.get_int("model.p2_points") * density);
  return tensor_grid(a, b);
}

SnapshotMatrix load_training(const Context& ctx) {
  const Config& c = ctx.cfg;
  const std::string& src = c.get("matrix.source");
  if (src == "model") {
    const auto grid = x_grid(c);
    return build_snapshot_matrix(parse_model_kind(c.get("model.name")), model_params(c, c.get("model.param_file"), 1),
                                 grid, ctx.workers);
  }
  if (src == "random") {
    const auto rows = c.get_int("matrix.rows");
    const auto cols = c.get_int("matrix.cols");
    if (rows < 1 || cols < 1) throw InputError("matrix.rows and matrix.cols must be positive");
    return SnapshotMatrix(random_gaussian_matrix(rows, cols, static_cast<std::uint64_t>(c.get_int("greedy.seed"))));
  }
  return load_snapshots(src, parse_format(c.get("matrix.format")));
}

SnapshotMatrix load_validation(const Context& ctx, const SnapshotMatrix& training) {
  const Config& c = ctx.cfg;
  const std::string& src = c.get("validate.source");
  if (src == "training") return training;
  if (src == "model") {
    const long long density = c.get_int("validate.density");
    if (density < 1) throw InputError("validate.density must be >= 1");
    return build_snapshot_matrix(parse_model_kind(c.get("model.name")),
                                 model_params(c, c.get("validate.param_file"), density), x_grid(c), ctx.workers);
  }
  return load_snapshots(src, parse_format(c.get("validate.format")));
}

GreedyOptions greedy_options(const Context& ctx, const SnapshotMatrix& s) {
  GreedyOptions opt;
  opt.tau = ctx.cfg.get_double("greedy.tau");
  const long long k_max = ctx.cfg.get_int("greedy.k_max");
  if (k_max < 1) throw InputError("greedy.k_max must be >= 1");
  opt.k_max = std::min<Index>(k_max, std::min(s.rows(), s.cols()));
  opt.workers = ctx.workers;
  return opt;
}

void write_basis(const Context& ctx, const Matrix& q) {
  save_snapshots(ctx.dir / "basis.npy", q, SnapshotFormat::npy);
  if (ctx.want_text) save_snapshots(ctx.dir / "basis.txt", q, SnapshotFormat::text);
}

void write_greedy(const Context& ctx, const GreedyState& st, const GreedyReport& rep, Report& report) {
  const Matrix q = st.basis();
  write_basis(ctx, q);
  save_indices(ctx.dir / "pivots.txt", st.pivots, SnapshotFormat::text);
  if (ctx.want_npy) save_indices(ctx.dir / "pivots.npy", st.pivots, SnapshotFormat::npy);
  save_dense_npy(ctx.dir / "r_rows.npy", Matrix(st.r_rows()));
  save_reals(ctx.dir / "sigma_hat.txt", rep.sigma_hat, SnapshotFormat::text);
  std::vector<IterationRecord> rows;
  for (std::size_t j = 0; j < rep.timings.size(); ++j) rows.push_back({ctx.workers, static_cast<Index>(j), rep.timings[j]});
  write_timings_csv((ctx.dir / "timings.csv").string(), rows);

  double sweeps = 0.0;
  for (int s : rep.sweeps) sweeps += s;
  report.add("k", static_cast<long long>(st.size()));
  report.add("status", std::string(to_string(rep.status)));
  report.add("final_error", rep.final_error);
  report.add("sigma_hat_first", rep.sigma_hat.empty() ? 0.0 : rep.sigma_hat.front());
  report.add("orthogonality_defect", st.size() > 0 ? orthogonality_defect(q) : 0.0);
  report.add("mean_sweeps", rep.sweeps.empty() ? 0.0 : sweeps / static_cast<double>(rep.sweeps.size()));
  report.add("rebases", static_cast<long long>(rep.rebases));
  report.add("flops_pivot", static_cast<long long>(rep.flops.pivot));
  report.add("flops_ortho", static_cast<long long>(rep.flops.ortho));
  double total = 0.0;
  for (const auto& t : rep.timings) total += t.t_total;
  report.add("greedy_seconds", total);
}

GreedyResult run_greedy(const Context& ctx, const SnapshotMatrix& s, Report& report) {
  const GreedyOptions opt = greedy_options(ctx, s);
  report.add("rows", static_cast<long long>(s.rows()));
  report.add("cols", static_cast<long long>(s.cols()));
  report.add("tau", opt.tau);
  report.add("k_max", static_cast<long long>(opt.k_max));
  report.add("workers", static_cast<long long>(opt.workers));
  GreedyResult r = greedy_build(s, opt);
  ctx.say("greedy: k = " + std::to_string(r.state.size()) + ", final error " + fmt_short(r.report.final_error) + " (" +
          to_string(r.report.status) + ")");
  return r;
}

void write_eim(const Context& ctx, const Matrix& q, const SnapshotMatrix& s, double sigma_k, Report& report) {
  const EimOperator op = build_eim(q);
  save_indices(ctx.dir / "eim_nodes.txt", op.nodes, SnapshotFormat::text);
  if (ctx.want_npy) save_indices(ctx.dir / "eim_nodes.npy", op.nodes, SnapshotFormat::npy);
  save_dense_npy(ctx.dir / "eim_node_matrix.npy", op.node_matrix);
  double worst = 0.0;
  for (Index i = 0; i < s.cols(); ++i) {
    const Vector f = s.col(i);
    const Vector g = eim_interpolate(op, q, op.sample(f));
    worst = std::max(worst, (f - g).cwiseAbs().maxCoeff());
  }
  report.add("eim_nodes", static_cast<long long>(op.size()));
  report.add("eim_lebesgue", op.lebesgue);
  report.add("eim_condition", op.condition);
  report.add("eim_max_error", worst);
  report.add("eim_error_over_sigma_k", sigma_k > 0.0 ? worst / sigma_k : 0.0);
  ctx.say("eim: " + std::to_string(op.size()) + " nodes, max interpolation error " + fmt_short(worst));
}

std::string validation_table(const ValidationReport& v, std::size_t limit) {
  std::ostringstream os;
  os << "worst validation columns\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "%8s %24s\n", "column", "error");
  os << buf;
  for (std::size_t i = 0; i < std::min(limit, v.worst.size()); ++i) {
    std::snprintf(buf, sizeof buf, "%8lld %24.17g\n", static_cast<long long>(v.worst[i].first), v.worst[i].second);
    os << buf;
  }
  return os.str();
}

int cmd_build(const Context& ctx, Report& report) {
  const SnapshotMatrix s = load_training(ctx);
  GreedyResult r = run_greedy(ctx, s, report);
  write_greedy(ctx, r.state, r.report, report);
  if (ctx.cfg.get_bool("eim.enabled") && r.state.size() > 0) {
    write_eim(ctx, Matrix(r.state.basis()), s, r.report.sigma_hat.back(), report);
  }
  return r.report.tolerance_reached() ? kExitOk : kExitNotReached;
}

int cmd_validate(const Context& ctx, Report& report) {
  const SnapshotMatrix s = load_training(ctx);
  GreedyResult r = run_greedy(ctx, s, report);
  write_greedy(ctx, r.state, r.report, report);
  const SnapshotMatrix v = load_validation(ctx, s);
  const ValidationReport val = validate(r.state.basis(), v, ctx.cfg.get_double("greedy.tau"), ctx.workers);
  report.add("validation_cols", static_cast<long long>(v.cols()));
  report.add("validation_pass", val.pass);
  report.add("validation_failing", static_cast<long long>(val.failing.size()));
  report.add("validation_max_error", val.max_error);
  report.text(validation_table(val, 20));
  ctx.say(std::string("validate: ") + (val.pass ? "pass" : "fail") + ", " + std::to_string(val.failing.size()) +
          " of " + std::to_string(v.cols()) + " columns at or above tau, max error " + fmt_short(val.max_error));
  return val.pass ? kExitOk : kExitNotReached;
}

int cmd_enrich(const Context& ctx, Report& report) {
  SnapshotMatrix s = load_training(ctx);
  GreedyResult r = run_greedy(ctx, s, report);
  const SnapshotMatrix v = load_validation(ctx, s);
  const long long rounds = ctx.cfg.get_int("enrich.rounds");
  if (rounds < 0) throw InputError("enrich.rounds must be >= 0");
  const EnrichResult e = enrich(s, r.state, r.report, v, static_cast<int>(rounds), greedy_options(ctx, s));
  write_greedy(ctx, r.state, r.report, report);
  report.add("training_cols", static_cast<long long>(s.cols()));
  report.add("enrich_rounds_used", static_cast<long long>(e.rounds_used));
  report.add("enrich_passed", e.passed);
  std::string sizes, errs;
  for (std::size_t i = 0; i < e.basis_sizes.size(); ++i) {
    sizes += (i ? "," : "") + std::to_string(e.basis_sizes[i]);
    errs += (i ? "," : "") + fmt(e.max_errors[i]);
  }
  report.add("enrich_basis_sizes", sizes);
  report.add("enrich_max_errors", errs);
  report.text(validation_table(e.final_validation, 20));
  ctx.say("enrich: " + std::to_string(e.rounds_used) + " rounds, basis sizes " + sizes + ", " +
          (e.passed ? "validation passes" : "validation still failing"));
  return e.passed ? kExitOk : kExitNotReached;
}

int cmd_eim(const Context& ctx, Report& report) {
  const SnapshotMatrix s = load_training(ctx);
  GreedyResult r = run_greedy(ctx, s, report);
  write_greedy(ctx, r.state, r.report, report);
  if (r.state.size() == 0) throw InputError("eim: greedy produced an empty basis");
  write_eim(ctx, Matrix(r.state.basis()), s, r.report.sigma_hat.back(), report);
  return r.report.tolerance_reached() ? kExitOk : kExitNotReached;
}

int cmd_pod_compare(const Context& ctx, Report& report) {
  const SnapshotMatrix s = load_training(ctx);
  GreedyResult r = run_greedy(ctx, s, report);
  write_greedy(ctx, r.state, r.report, report);
  const Index k = r.state.size();
  if (k == 0) throw InputError("pod-compare: greedy produced an empty basis");

  const SvdResult d = svd(s.data());
  const double sigma_next = k < d.sigma.size() ? d.sigma(k) : 0.0;
  const double scale = d.sigma(0);

  struct Row {
    std::string name;
    Index k;
    ErrorReport err;
  };
  std::vector<Row> rows;
  rows.push_back({"greedy", k, projection_errors(s, Matrix(r.state.basis()), ctx.workers)});
  rows.push_back({"pod", k, projection_errors(s, Matrix(d.v.leftCols(k)), ctx.workers)});
  const bool rrqr_ok = k <= numerical_rank(d.sigma);
  if (rrqr_ok) rows.push_back({"optimal_rrqr", k, projection_errors(s, optimal_rrqr(s, k), ctx.workers)});
  const ReconstructionResult rec =
      reconstruct_basis(s, ctx.cfg.get_double("reconstruct.tau1"), ctx.cfg.get_double("reconstruct.tau2"));
  rows.push_back({"reconstruct", rec.k, projection_errors(s, rec.basis, ctx.workers)});

  std::ostringstream table;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-14s %5s %24s %24s %24s\n", "method", "k", "err_2", "err_F", "err_max");
  table << buf;
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%-14s %5lld %24.17g %24.17g %24.17g\n", row.name.c_str(),
                  static_cast<long long>(row.k), row.err.qr_err_2, row.err.qr_err_F, row.err.qr_err_max);
    table << buf;
    report.add(row.name + "_k", static_cast<long long>(row.k));
    report.add(row.name + "_2norm", row.err.qr_err_2);
    report.add(row.name + "_Fnorm", row.err.qr_err_F);
    report.add(row.name + "_maxnorm", row.err.qr_err_max);
  }
  report.add("sigma_k_plus_1", sigma_next);

  const double slack = 1e-12 * scale;
  const auto& g = rows[0].err;
  const auto& p = rows[1].err;
  bool ok = true;
  auto check = [&](const std::string& name, bool pass) {
    report.add("check_" + name, pass);
    ok = ok && pass;
  };
  check("pod_2_le_greedy_2", p.qr_err_2 <= g.qr_err_2 + slack);
  check("pod_F_le_greedy_F", p.qr_err_F <= g.qr_err_F + slack);
  check("pod_2_eq_sigma", std::abs(p.qr_err_2 - sigma_next) <= 1e-10 * scale);
  check("greedy_max_eq_final_error", std::abs(g.qr_err_max - r.report.final_error) <= 1e-8 * scale);
  if (rrqr_ok) check("rrqr_2_eq_sigma", std::abs(rows[2].err.qr_err_2 - sigma_next) <= 1e-9 * scale);
  for (const auto& row : rows)
    check(row.name + "_max_le_2_le_F",
          row.err.qr_err_max <= row.err.qr_err_2 + slack && row.err.qr_err_2 <= row.err.qr_err_F + slack);
  report.text(table.str());
  if (!ctx.quiet) ctx.log << table.str();
  ctx.say(std::string("pod-compare: orderings ") + (ok ? "hold" : "VIOLATED"));
  return ok ? kExitOk : kExitNotReached;
}

int cmd_bench(const Context& ctx, Report& report) {
  const Config& c = ctx.cfg;
  std::vector<int> counts;
  for (long long w : c.get_int_list("bench.worker_counts")) {
    if (w < 1) throw InputError("bench.worker_counts entries must be positive");
    counts.push_back(static_cast<int>(w));
  }
  const long long k = c.get_int("bench.k");
  if (k < 1) throw InputError("bench.k must be >= 1");
  const std::string& mode = c.get("bench.mode");
  ScalingTable table;
  if (mode == "strong") {
    const SnapshotMatrix s = load_training(ctx);
    const Index kk = std::min<Index>(k, std::min(s.rows(), s.cols()));
    report.add("rows", static_cast<long long>(s.rows()));
    report.add("cols", static_cast<long long>(s.cols()));
    table = strong_scaling(s, kk, counts);
  } else if (mode == "weak") {
    table = weak_scaling(c.get_int("bench.rows"), c.get_int("bench.cols_per_worker"), k, counts,
                         static_cast<std::uint64_t>(c.get_int("greedy.seed")));
  } else {
    throw InputError("bench.mode must be strong or weak, got '" + mode + "'");
  }
  write_timings_csv((ctx.dir / "timings.csv").string(), table.iterations);
  const double ident = table.worst_identity_violation();
  report.add("mode", mode);
  report.add("timing_identity_worst", ident);
  report.add("timing_identity_ok", ident <= 0.01);
  for (const auto& row : table.rows) {
    const std::string p = "C" + std::to_string(row.workers) + "_";
    report.add(p + "t_pivot_c", row.t_pivot_c);
    report.add(p + "t_imgs", row.t_imgs);
    report.add(p + "scaled_total", row.scaled_total);
    report.add(p + "efficiency", row.efficiency);
    report.add(p + "speedup", row.speedup);
    report.add(p + "predicted_efficiency", row.predicted_efficiency);
    report.add(p + "imgs_r2", row.imgs_r2);
    report.add(p + "pivot_spread", row.pivot_spread);
  }
  report.text(table.summary());
  if (!ctx.quiet) ctx.log << table.summary();
  return ident <= 0.01 ? kExitOk : kExitNotReached;
}

int cmd_reconstruct(const Context& ctx, Report& report) {
  const SnapshotMatrix s = load_training(ctx);
  const double tau1 = ctx.cfg.get_double("reconstruct.tau1");
  const double tau2 = ctx.cfg.get_double("reconstruct.tau2");
  const ReconstructionResult rec = reconstruct_basis(s, tau1, tau2);
  if (rec.tau_order_warning) ctx.say("warning: reconstruct.tau2 > reconstruct.tau1");
  write_basis(ctx, rec.basis);
  std::vector<double> sig(rec.sigma_r.data(), rec.sigma_r.data() + rec.sigma_r.size());
  save_reals(ctx.dir / "sigma_r.txt", sig, SnapshotFormat::text);
  const ErrorReport err = projection_errors(s, rec.basis, ctx.workers);
  report.add("rows", static_cast<long long>(s.rows()));
  report.add("cols", static_cast<long long>(s.cols()));
  report.add("tau1", tau1);
  report.add("tau2", tau2);
  report.add("j", static_cast<long long>(rec.j));
  report.add("k", static_cast<long long>(rec.k));
  report.add("bracket_found", rec.bracket_found);
  report.add("tau_order_warning", rec.tau_order_warning);
  report.add("error_2norm", err.qr_err_2);
  report.add("bound_s1_sigma_next", rec.s1_sigma_next);
  report.add("bound_r22_2norm", rec.r22_norm);
  report.add("upper_bound", rec.upper_bound(rec.k));
  ctx.say("reconstruct: j = " + std::to_string(rec.j) + ", k = " + std::to_string(rec.k) + ", error " +
          fmt_short(err.qr_err_2) + " <= bound " + fmt_short(rec.upper_bound(rec.k)));
  return rec.bracket_found ? kExitOk : kExitNotReached;
}

}  // namespace

int run_command(const std::string& subcommand, const Config& config, bool quiet, std::ostream& log) {
  const long long workers = config.get_int("greedy.workers");
  if (workers < 1) throw InputError("greedy.workers must be >= 1");
  Context ctx{config, fs::path(config.get("output.dir")), quiet, log, static_cast<int>(workers)};
  const auto formats = config.get_list("output.formats");
  for (const auto& f : formats)
    if (f != "npy" && f != "text") throw InputError("output.formats: unknown format '" + f + "'");
  ctx.want_npy = std::find(formats.begin(), formats.end(), "npy") != formats.end();
  ctx.want_text = std::find(formats.begin(), formats.end(), "text") != formats.end();

  std::error_code ec;
  fs::create_directories(ctx.dir, ec);
  if (ec) throw InputError("cannot create output directory '" + ctx.dir.string() + "': " + ec.message());
  {
    std::ofstream echo(ctx.dir / "effective.cfg");
    echo << config.to_string();
    if (!echo) throw InputError("cannot write effective.cfg");
  }

  Report report;
  report.add("command", subcommand);
  int code = kExitOk;
  if (subcommand == "build") code = cmd_build(ctx, report);
  else if (subcommand == "validate") code = cmd_validate(ctx, report);
  else if (subcommand == "enrich") code = cmd_enrich(ctx, report);
  else if (subcommand == "eim") code = cmd_eim(ctx, report);
  else if (subcommand == "pod-compare") code = cmd_pod_compare(ctx, report);
  else if (subcommand == "bench") code = cmd_bench(ctx, report);
  else if (subcommand == "reconstruct") code = cmd_reconstruct(ctx, report);
  else throw InputError("unknown subcommand '" + subcommand + "'");
  report.add("exit_code", static_cast<long long>(code));
  report.write(ctx.dir, "rbqr " + subcommand);
  return code;
}

int run(int argc, char** argv) {
  CLI::App app{"Reduced-basis greedy / column-pivoted QR toolkit"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string config_path;
  std::vector<std::string> overrides;
  int workers = 1;
  bool quiet = false;
  app.add_option("--config", config_path, "configuration file (key = value, [section] headers)");
  app.add_option("--set", overrides, "override a key, e.g. greedy.tau=1e-10 (repeatable)")->take_all();
  auto* workers_opt = app.add_option("--workers", workers, "worker threads (overrides greedy.workers)");
  app.add_flag("--quiet", quiet, "suppress progress output");
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"build", "run the greedy and export basis, pivots, R rows, sigma_hat"},
      {"validate", "build, then check the basis against a validation set"},
      {"enrich", "build, then enrich the basis with failing validation columns"},
      {"eim", "build, then select empirical interpolation nodes"},
      {"pod-compare", "compare greedy, POD, optimal RRQR and reconstruction errors"},
      {"bench", "strong or weak scaling benchmark"},
      {"reconstruct", "reconstruction from a partial pivoted QR and a small SVD"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    Config cfg = config_path.empty() ? Config() : Config::from_file(config_path);
    for (const auto& o : overrides) cfg.set(o);
    if (workers_opt->count() > 0) cfg.set("greedy.workers", std::to_string(workers));
    return run_command(app.get_subcommands().front()->get_name(), cfg, quiet, std::cout);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const DimensionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const CLI::Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotReached;
  }
}

}  // namespace rbqr::cli
