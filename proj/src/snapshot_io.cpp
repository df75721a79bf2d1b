#include "rbqr/snapshot_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "rbqr/npy.hpp"

namespace rbqr {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool is_skippable(std::string_view line) {
  for (char c : line) {
    if (c == '#') return true;
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

template <typename T>
T parse_number(std::string_view tok, const std::filesystem::path& path, std::size_t line_no) {
  T value{};
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  // from_chars does not accept a leading '+'
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw InputError(path.string() + ": line " + std::to_string(line_no) + ": cannot parse '" + std::string(tok) + "'");
  }
  return value;
}

std::string format_double(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

SnapshotMatrix load_npy_snapshots(const std::filesystem::path& path) {
  const npy::Array a = npy::read(path);
  if (a.shape.size() != 2) {
    throw InputError(path.string() + ": snapshot array must be 2-D (M, N), got " + std::to_string(a.shape.size()) + "-D");
  }
  if (a.dtype == npy::Dtype::int64) throw InputError(path.string() + ": integer dtype is not a snapshot type");
  const auto n_snap = static_cast<Index>(a.shape[0]);
  const auto n_grid = static_cast<Index>(a.shape[1]);
  if (n_snap == 0 || n_grid == 0) {
    throw InputError(path.string() + ": snapshot array has a zero dimension (" + std::to_string(n_snap) + ", " +
                     std::to_string(n_grid) + ")");
  }
  const std::size_t header_bytes = std::filesystem::file_size(path) - a.payload.size();
  const std::size_t isz = npy::item_size(a.dtype);

  Matrix m(n_grid, n_snap);
  for (Index snap = 0; snap < n_snap; ++snap) {
    for (Index g = 0; g < n_grid; ++g) {
      // row-major (M, N): item (snap, g) at snap*N + g; fortran order: g*M + snap
      const std::size_t item = a.fortran_order ? static_cast<std::size_t>(g * n_snap + snap)
                                               : static_cast<std::size_t>(snap * n_grid + g);
      Scalar z;
      if (a.dtype == npy::Dtype::complex128) {
        double re, im;
        std::memcpy(&re, a.payload.data() + item * isz, 8);
        std::memcpy(&im, a.payload.data() + item * isz + 8, 8);
        z = Scalar(re, im);
      } else {
        double re;
        std::memcpy(&re, a.payload.data() + item * isz, 8);
        z = Scalar(re, 0.0);
      }
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        std::ostringstream msg;
        msg << path.string() << ": non-finite entry at (" << g << ", " << snap << ") (snapshot " << snap
            << ", component " << g << "), byte offset " << header_bytes + item * isz;
        throw InputError(msg.str());
      }
      m(g, snap) = z;
    }
  }
  return SnapshotMatrix(std::move(m));
}

SnapshotMatrix load_text_snapshots(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open for reading");
  std::vector<std::vector<Scalar>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    const auto toks = split_ws(line);
    if (toks.size() % 2 != 0) {
      throw InputError(path.string() + ": line " + std::to_string(line_no) + ": odd number of values (" +
                       std::to_string(toks.size()) + "); expected re/im pairs");
    }
    if (rows.empty()) width = toks.size();
    if (toks.size() != width) {
      throw InputError(path.string() + ": line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                       " values, got " + std::to_string(toks.size()));
    }
    std::vector<Scalar> row(toks.size() / 2);
    for (std::size_t k = 0; k < row.size(); ++k) {
      const double re = parse_number<double>(toks[2 * k], path, line_no);
      const double im = parse_number<double>(toks[2 * k + 1], path, line_no);
      if (!std::isfinite(re) || !std::isfinite(im)) {
        throw InputError(path.string() + ": line " + std::to_string(line_no) + ": non-finite entry at (" +
                         std::to_string(k) + ", " + std::to_string(rows.size()) + ")");
      }
      row[k] = Scalar(re, im);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || width == 0) throw InputError(path.string() + ": no snapshots found");
  Matrix m(static_cast<Index>(width / 2), static_cast<Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t i = 0; i < rows[j].size(); ++i) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[j][i];
  return SnapshotMatrix(std::move(m));
}

std::vector<std::string> read_value_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open for reading");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (is_skippable(line)) continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace

SnapshotFormat parse_format(std::string_view name) {
  if (name == "npy") return SnapshotFormat::npy;
  if (name == "text" || name == "txt") return SnapshotFormat::text;
  throw InputError("unknown format '" + std::string(name) + "' (expected npy or text)");
}

SnapshotMatrix load_snapshots(const std::filesystem::path& path, SnapshotFormat format) {
  return format == SnapshotFormat::npy ? load_npy_snapshots(path) : load_text_snapshots(path);
}

void save_snapshots(const std::filesystem::path& path, const Matrix& columns, SnapshotFormat format) {
  if (format == SnapshotFormat::npy) {
    // column-major N x M storage is exactly row-major (M, N)
    npy::write(path, npy::Dtype::complex128,
               {static_cast<std::size_t>(columns.cols()), static_cast<std::size_t>(columns.rows())}, columns.data());
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  for (Index j = 0; j < columns.cols(); ++j) {
    for (Index i = 0; i < columns.rows(); ++i) {
      if (i) out << ' ';
      out << format_double(columns(i, j).real()) << ' ' << format_double(columns(i, j).imag());
    }
    out << '\n';
  }
  if (!out) throw InputError(path.string() + ": write failed");
}

void save_indices(const std::filesystem::path& path, std::span<const Index> values, SnapshotFormat format) {
  if (format == SnapshotFormat::npy) {
    std::vector<std::int64_t> buf(values.begin(), values.end());
    npy::write(path, npy::Dtype::int64, {buf.size()}, buf.data());
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  for (Index v : values) out << v << '\n';
}

std::vector<Index> load_indices(const std::filesystem::path& path, SnapshotFormat format) {
  std::vector<Index> out;
  if (format == SnapshotFormat::npy) {
    const npy::Array a = npy::read(path);
    if (a.dtype != npy::Dtype::int64 || a.shape.size() != 1) throw InputError(path.string() + ": expected 1-D <i8 array");
    out.resize(a.count());
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::int64_t v;
      std::memcpy(&v, a.payload.data() + 8 * i, 8);
      out[i] = static_cast<Index>(v);
    }
    return out;
  }
  std::size_t line_no = 0;
  for (const auto& line : read_value_lines(path)) {
    ++line_no;
    const auto toks = split_ws(line);
    for (auto t : toks) out.push_back(static_cast<Index>(parse_number<long long>(t, path, line_no)));
  }
  return out;
}

void save_reals(const std::filesystem::path& path, std::span<const double> values, SnapshotFormat format) {
  if (format == SnapshotFormat::npy) {
    npy::write(path, npy::Dtype::float64, {values.size()}, values.data());
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  for (double v : values) out << format_double(v) << '\n';
}

std::vector<double> load_reals(const std::filesystem::path& path, SnapshotFormat format) {
  std::vector<double> out;
  if (format == SnapshotFormat::npy) {
    const npy::Array a = npy::read(path);
    if (a.dtype != npy::Dtype::float64 || a.shape.size() != 1) throw InputError(path.string() + ": expected 1-D <f8 array");
    out.resize(a.count());
    std::memcpy(out.data(), a.payload.data(), a.payload.size());
    return out;
  }
  std::size_t line_no = 0;
  for (const auto& line : read_value_lines(path)) {
    ++line_no;
    for (auto t : split_ws(line)) out.push_back(parse_number<double>(t, path, line_no));
  }
  return out;
}

void save_dense_npy(const std::filesystem::path& path, const Matrix& m) {
  RowMatrix rm = m;
  npy::write(path, npy::Dtype::complex128, {static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())},
             rm.data());
}

Matrix load_dense_npy(const std::filesystem::path& path) {
  const npy::Array a = npy::read(path);
  if (a.dtype != npy::Dtype::complex128 || a.shape.size() != 2) throw InputError(path.string() + ": expected 2-D <c16 array");
  const auto r = static_cast<Index>(a.shape[0]);
  const auto c = static_cast<Index>(a.shape[1]);
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < c; ++j) {
      const std::size_t item = a.fortran_order ? static_cast<std::size_t>(j * r + i) : static_cast<std::size_t>(i * c + j);
      double re, im;
      std::memcpy(&re, a.payload.data() + 16 * item, 8);
      std::memcpy(&im, a.payload.data() + 16 * item + 8, 8);
      m(i, j) = Scalar(re, im);
    }
  }
  return m;
}

}  // namespace rbqr
