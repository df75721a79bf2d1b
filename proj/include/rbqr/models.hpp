#ifndef RBQR_MODELS_HPP
#define RBQR_MODELS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rbqr/snapshot_matrix.hpp"
#include "rbqr/types.hpp"

namespace rbqr {

enum class ModelKind { damped_chirp, gaussian_bump };

/// "damped_chirp" / "chirp" or "gaussian_bump" / "gaussian". Throws InputError otherwise.
ModelKind parse_model_kind(const std::string& name);
const char* to_string(ModelKind kind);

using ParamTuple = std::vector<double>;

/// s_j = exp(-damping x_j) exp(i frequency x_j^2). Requires frequency >= 0,
/// damping >= 0 and a non-empty, strictly increasing grid.
Vector damped_chirp(double frequency, double damping, std::span<const double> grid);

/// s_j = exp(-(x_j - center)^2 / width^2), width > 0.
Vector gaussian_bump(double center, double width, std::span<const double> grid);

/// Dispatches on `kind`; `params` holds (frequency, damping) or (center, width).
Vector evaluate_model(ModelKind kind, const ParamTuple& params, std::span<const double> grid);

/// Column i = model(params[i], grid). Columns are produced by `workers`
/// threads over disjoint ranges; the result does not depend on `workers`.
/// Invalid parameters raise InputError naming the column.
SnapshotMatrix build_snapshot_matrix(ModelKind kind, const std::vector<ParamTuple>& params,
                                     std::span<const double> grid, int workers = 1);

/// n equispaced points from a to b inclusive (n == 1 gives {a}).
std::vector<double> linspace(double a, double b, Index n);

/// All pairs (a_i, b_j), a varying slowest.
std::vector<ParamTuple> tensor_grid(std::span<const double> a, std::span<const double> b);

/// One tuple per line, whitespace-separated decimals; blank lines and '#'
/// comments are skipped. Every line must have the same arity.
std::vector<ParamTuple> load_parameter_file(const std::string& path);

/// Entries with independent standard normal real and imaginary parts.
Matrix random_gaussian_matrix(Index rows, Index cols, std::uint64_t seed);

/// Random matrix with prescribed singular values: U diag(sigma) W^H with
/// random orthonormal U (rows x r) and W (cols x r), r = sigma.size().
Matrix matrix_with_spectrum(Index rows, Index cols, const RealVector& sigma, std::uint64_t seed);

}  // namespace rbqr

#endif  // RBQR_MODELS_HPP
