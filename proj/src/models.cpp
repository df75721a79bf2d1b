#include "rbqr/models.hpp"

#include <Eigen/QR>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "rbqr/parallel.hpp"

namespace rbqr {

namespace {

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw InputError("model grid is empty");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!std::isfinite(grid[j])) throw InputError("model grid has a non-finite point");
    if (j > 0 && !(grid[j] > grid[j - 1])) throw InputError("model grid must be strictly increasing");
  }
}

Matrix orthonormal_columns(Index rows, Index cols, std::uint64_t seed) {
  const Matrix g = random_gaussian_matrix(rows, cols, seed);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

}  // namespace

ModelKind parse_model_kind(const std::string& name) {
  if (name == "damped_chirp" || name == "chirp") return ModelKind::damped_chirp;
  if (name == "gaussian_bump" || name == "gaussian") return ModelKind::gaussian_bump;
  throw InputError("unknown model '" + name + "' (expected damped_chirp or gaussian_bump)");
}

const char* to_string(ModelKind kind) {
  return kind == ModelKind::damped_chirp ? "damped_chirp" : "gaussian_bump";
}

Vector damped_chirp(double frequency, double damping, std::span<const double> grid) {
  check_grid(grid);
  if (!(frequency >= 0.0) || !std::isfinite(frequency)) throw InputError("damped_chirp: frequency must be >= 0");
  if (!(damping >= 0.0) || !std::isfinite(damping)) throw InputError("damped_chirp: damping must be >= 0");
  Vector s(static_cast<Index>(grid.size()));
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid[j];
    s(static_cast<Index>(j)) = std::exp(-damping * x) * std::polar(1.0, frequency * x * x);
  }
  return s;
}

Vector gaussian_bump(double center, double width, std::span<const double> grid) {
  check_grid(grid);
  if (!(width > 0.0) || !std::isfinite(width) || !std::isfinite(center)) {
    throw InputError("gaussian_bump: width must be positive and parameters finite");
  }
  Vector s(static_cast<Index>(grid.size()));
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double d = (grid[j] - center) / width;
    s(static_cast<Index>(j)) = std::exp(-d * d);
  }
  return s;
}

Vector evaluate_model(ModelKind kind, const ParamTuple& params, std::span<const double> grid) {
  if (params.size() != 2) throw InputError("model parameters must be a pair, got " + std::to_string(params.size()));
  if (kind == ModelKind::damped_chirp) return damped_chirp(params[0], params[1], grid);
  return gaussian_bump(params[0], params[1], grid);
}

SnapshotMatrix build_snapshot_matrix(ModelKind kind, const std::vector<ParamTuple>& params,
                                     std::span<const double> grid, int workers) {
  if (params.empty()) throw InputError("build_snapshot_matrix: parameter grid is empty");
  check_grid(grid);
  if (workers < 1) throw InputError("build_snapshot_matrix: workers must be >= 1");
  const auto m = static_cast<Index>(params.size());
  Matrix out(static_cast<Index>(grid.size()), m);
  const auto partition = make_partition(m, workers);
  parallel_for_ranges(partition, [&](int, ColumnRange range) {
    for (Index i = range.begin; i < range.end; ++i) {
      try {
        out.col(i) = evaluate_model(kind, params[static_cast<std::size_t>(i)], grid);
      } catch (const InputError& e) {
        throw InputError("column " + std::to_string(i) + ": " + e.what());
      }
    }
  });
  return SnapshotMatrix(std::move(out));
}

std::vector<double> linspace(double a, double b, Index n) {
  if (n < 1) throw InputError("linspace: need at least one point");
  std::vector<double> x(static_cast<std::size_t>(n));
  if (n == 1) {
    x[0] = a;
    return x;
  }
  const double h = (b - a) / static_cast<double>(n - 1);
  for (Index i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = a + h * static_cast<double>(i);
  x.back() = b;
  return x;
}

std::vector<ParamTuple> tensor_grid(std::span<const double> a, std::span<const double> b) {
  std::vector<ParamTuple> out;
  out.reserve(a.size() * b.size());
  for (double u : a)
    for (double v : b) out.push_back({u, v});
  return out;
}

std::vector<ParamTuple> load_parameter_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open parameter file '" + path + "'");
  std::vector<ParamTuple> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    ParamTuple t;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || !std::isfinite(v)) {
        throw InputError(path + ":" + std::to_string(lineno) + ": bad number '" + tok + "'");
      }
      t.push_back(v);
    }
    if (t.empty()) continue;
    if (!out.empty() && t.size() != out.front().size()) {
      throw InputError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(out.front().size()) +
                       " values, got " + std::to_string(t.size()));
    }
    out.push_back(std::move(t));
  }
  if (out.empty()) throw InputError("parameter file '" + path + "' has no parameters");
  return out;
}

Matrix random_gaussian_matrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix a(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = dist(gen);
      const double im = dist(gen);
      a(i, j) = Scalar(re, im);
    }
  return a;
}

Matrix matrix_with_spectrum(Index rows, Index cols, const RealVector& sigma, std::uint64_t seed) {
  const Index r = sigma.size();
  if (r > rows || r > cols) throw InputError("matrix_with_spectrum: too many singular values");
  const Matrix u = orthonormal_columns(rows, r, seed);
  const Matrix w = orthonormal_columns(cols, r, seed + 0x9e3779b97f4a7c15ULL);
  return u * sigma.asDiagonal() * w.adjoint();
}

}  // namespace rbqr
