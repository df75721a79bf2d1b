#include "rbqr/npy.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

#include "rbqr/types.hpp"

static_assert(std::endian::native == std::endian::little, "npy I/O assumes a little-endian host");

namespace rbqr::npy {

namespace {

constexpr char kMagic[] = "\x93NUMPY";
constexpr std::size_t kMagicLen = 6;

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t offset, const std::string& what) {
  std::ostringstream msg;
  msg << path.string() << ": byte offset " << offset << ": " << what;
  throw InputError(msg.str());
}

// Minimal scanner over the Python-literal header dict.
class HeaderScanner {
 public:
  explicit HeaderScanner(const std::string& text) : s_(text) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) {
      throw InputError(std::string("npy header: expected '") + c + "' at header position " + std::to_string(pos_));
    }
    ++pos_;
  }
  std::string quoted() {
    skip_ws();
    if (pos_ >= s_.size() || (s_[pos_] != '\'' && s_[pos_] != '"')) {
      throw InputError("npy header: expected quoted string at header position " + std::to_string(pos_));
    }
    const char q = s_[pos_++];
    const auto end = s_.find(q, pos_);
    if (end == std::string::npos) throw InputError("npy header: unterminated string");
    std::string out = s_.substr(pos_, end - pos_);
    pos_ = end + 1;
    return out;
  }
  std::string word() {
    skip_ws();
    const auto start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return s_.substr(start, pos_ - start);
  }
  std::size_t position() const { return pos_; }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string descr(Dtype dtype) {
  switch (dtype) {
    case Dtype::complex128: return "<c16";
    case Dtype::float64: return "<f8";
    case Dtype::int64: return "<i8";
  }
  return "";
}

std::size_t item_size(Dtype dtype) {
  switch (dtype) {
    case Dtype::complex128: return 16;
    case Dtype::float64: return 8;
    case Dtype::int64: return 8;
  }
  return 0;
}

std::size_t Array::count() const {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

Header parse_header(const std::string& text) {
  HeaderScanner sc(text);
  Header h;
  bool have_descr = false, have_order = false, have_shape = false;
  sc.expect('{');
  while (!sc.peek('}')) {
    const std::string key = sc.quoted();
    sc.expect(':');
    if (key == "descr") {
      h.descr = sc.quoted();
      have_descr = true;
    } else if (key == "fortran_order") {
      const std::string v = sc.word();
      if (v == "True") h.fortran_order = true;
      else if (v == "False") h.fortran_order = false;
      else throw InputError("npy header: fortran_order must be True or False, got '" + v + "'");
      have_order = true;
    } else if (key == "shape") {
      sc.expect('(');
      while (!sc.peek(')')) {
        const std::string v = sc.word();
        if (v.empty() || !std::all_of(v.begin(), v.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
          throw InputError("npy header: bad shape entry '" + v + "'");
        }
        h.shape.push_back(static_cast<std::size_t>(std::stoull(v)));
        if (sc.peek(',')) sc.expect(',');
      }
      sc.expect(')');
      have_shape = true;
    } else {
      throw InputError("npy header: unknown key '" + key + "'");
    }
    if (sc.peek(',')) sc.expect(',');
  }
  sc.expect('}');
  if (!have_descr || !have_order || !have_shape) {
    throw InputError("npy header: missing one of descr, fortran_order, shape");
  }
  return h;
}

Array read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open for reading");

  char magic[kMagicLen];
  if (!in.read(magic, kMagicLen) || std::memcmp(magic, kMagic, kMagicLen) != 0) fail(path, 0, "bad magic string");

  unsigned char version[2];
  if (!in.read(reinterpret_cast<char*>(version), 2)) fail(path, kMagicLen, "truncated version");
  std::size_t header_len = 0;
  std::size_t offset = kMagicLen + 2;
  if (version[0] == 1) {
    unsigned char b[2];
    if (!in.read(reinterpret_cast<char*>(b), 2)) fail(path, offset, "truncated header length");
    header_len = b[0] | (static_cast<std::size_t>(b[1]) << 8);
    offset += 2;
  } else if (version[0] == 2) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) fail(path, offset, "truncated header length");
    header_len = b[0] | (static_cast<std::size_t>(b[1]) << 8) | (static_cast<std::size_t>(b[2]) << 16) |
                 (static_cast<std::size_t>(b[3]) << 24);
    offset += 4;
  } else {
    fail(path, kMagicLen, "unsupported npy version " + std::to_string(version[0]) + "." + std::to_string(version[1]));
  }

  std::string text(header_len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(header_len))) fail(path, offset, "truncated header");

  Header h;
  try {
    h = parse_header(text);
  } catch (const InputError& e) {
    fail(path, offset, e.what());
  }
  offset += header_len;

  Array a;
  if (h.descr == "<c16") a.dtype = Dtype::complex128;
  else if (h.descr == "<f8") a.dtype = Dtype::float64;
  else if (h.descr == "<i8") a.dtype = Dtype::int64;
  else fail(path, kMagicLen + 2, "unsupported dtype '" + h.descr + "'");
  a.shape = h.shape;
  a.fortran_order = h.fortran_order;

  const std::size_t nbytes = a.count() * item_size(a.dtype);
  a.payload.resize(nbytes);
  if (!in.read(a.payload.data(), static_cast<std::streamsize>(nbytes))) {
    fail(path, offset + static_cast<std::size_t>(std::max<std::streamsize>(in.gcount(), 0)),
         "payload truncated: expected " + std::to_string(nbytes) + " bytes");
  }
  return a;
}

void write(const std::filesystem::path& path, Dtype dtype, const std::vector<std::size_t>& shape,
           const void* data) {
  std::ostringstream dict;
  dict << "{'descr': '" << descr(dtype) << "', 'fortran_order': False, 'shape': (";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    dict << shape[i];
    if (shape.size() == 1 || i + 1 < shape.size()) dict << ",";
    if (i + 1 < shape.size()) dict << " ";
  }
  dict << "), }";
  std::string header = dict.str();
  // pad so that magic + version + length + header is a multiple of 64, ending in '\n'
  const std::size_t preamble = kMagicLen + 2 + 2;
  std::size_t total = preamble + header.size() + 1;
  header.append((64 - total % 64) % 64, ' ');
  header.push_back('\n');
  if (header.size() > 65535) throw InputError("npy header too long for version 1.0");

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  out.write(kMagic, kMagicLen);
  const unsigned char version[2] = {1, 0};
  out.write(reinterpret_cast<const char*>(version), 2);
  const unsigned char len[2] = {static_cast<unsigned char>(header.size() & 0xff),
                                static_cast<unsigned char>((header.size() >> 8) & 0xff)};
  out.write(reinterpret_cast<const char*>(len), 2);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  std::size_t count = 1;
  for (auto d : shape) count *= d;
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(count * item_size(dtype)));
  if (!out) throw InputError(path.string() + ": write failed");
}

}  // namespace rbqr::npy
