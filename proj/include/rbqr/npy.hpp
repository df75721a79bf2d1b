#ifndef RBQR_NPY_HPP
#define RBQR_NPY_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace rbqr::npy {

enum class Dtype { complex128, float64, int64 };

/// Descriptor string written for a dtype, e.g. "<c16".
std::string descr(Dtype dtype);
std::size_t item_size(Dtype dtype);

/// Raw contents of a .npy file.
struct Array {
  Dtype dtype = Dtype::float64;
  std::vector<std::size_t> shape;
  bool fortran_order = false;
  std::vector<char> payload;  // little-endian items, payload.size() == count() * item_size

  std::size_t count() const;
};

/// Reads a version 1.0 or 2.0 .npy file. Accepts descr "<c16", "<f8" and
/// "<i8". Throws InputError naming the byte offset of the first problem.
Array read(const std::filesystem::path& path);

/// Writes a version 1.0 .npy file with fortran_order False. `data` must hold
/// product(shape) items of the given dtype in row-major order.
void write(const std::filesystem::path& path, Dtype dtype, const std::vector<std::size_t>& shape,
           const void* data);

/// Parses the header dictionary text. Exposed for tests.
struct Header {
  std::string descr;
  bool fortran_order = false;
  std::vector<std::size_t> shape;
};
Header parse_header(const std::string& text);

}  // namespace rbqr::npy

#endif  // RBQR_NPY_HPP
