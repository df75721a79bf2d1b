#ifndef RBQR_SNAPSHOT_IO_HPP
#define RBQR_SNAPSHOT_IO_HPP

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "rbqr/snapshot_matrix.hpp"
#include "rbqr/types.hpp"

namespace rbqr {

enum class SnapshotFormat { npy, text };

/// "npy" or "text" (also "txt"). Throws InputError otherwise.
SnapshotFormat parse_format(std::string_view name);

// On disk a snapshot set is an (M, N) array: each ROW is one snapshot.
// In memory the same data is an N x M matrix whose COLUMNS are snapshots.
//
// npy:  descr "<c16" or "<f8" (real data promoted to complex), v1.0 or v2.0.
// text: one snapshot per line, 2N whitespace separated floats "re im re im ...",
//       lines starting with '#' and blank lines are ignored.

SnapshotMatrix load_snapshots(const std::filesystem::path& path, SnapshotFormat format);

/// Writes the columns of `columns` as on-disk rows. npy always uses "<c16".
void save_snapshots(const std::filesystem::path& path, const Matrix& columns, SnapshotFormat format);

/// Integer lists (pivots, interpolation nodes): text is one integer per line,
/// npy is a 1-D "<i8" array.
void save_indices(const std::filesystem::path& path, std::span<const Index> values, SnapshotFormat format);
std::vector<Index> load_indices(const std::filesystem::path& path, SnapshotFormat format);

/// Real sequences (sigma_hat): text is one "%.17g" value per line, npy is "<f8".
void save_reals(const std::filesystem::path& path, std::span<const double> values, SnapshotFormat format);
std::vector<double> load_reals(const std::filesystem::path& path, SnapshotFormat format);

/// Writes a matrix as a row-major 2-D "<c16" npy array of its own shape
/// (no snapshot transposition). Used for R factors and node matrices.
void save_dense_npy(const std::filesystem::path& path, const Matrix& m);
Matrix load_dense_npy(const std::filesystem::path& path);

}  // namespace rbqr

#endif  // RBQR_SNAPSHOT_IO_HPP
