// SPDX-License-Identifier: Apache-2.0
#include "trom/tensor_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "trom/error.hpp"

namespace trom {
namespace detail {
namespace {

template <typename T>
void write_le(std::ostream& out, T v) {
  std::array<unsigned char, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
  if (!out) fail(ErrorCode::IoError, "write failed");
}

template <typename T>
T read_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(T))) fail(ErrorCode::FormatError, "truncated tensor stream");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T v;
  std::memcpy(&v, bytes.data(), sizeof(T));
  return v;
}

}  // namespace

void write_u32(std::ostream& out, std::uint32_t v) { write_le(out, v); }
void write_u64(std::ostream& out, std::uint64_t v) { write_le(out, v); }
void write_f64(std::ostream& out, double v) { write_le(out, v); }
std::uint32_t read_u32(std::istream& in) { return read_le<std::uint32_t>(in); }
std::uint64_t read_u64(std::istream& in) { return read_le<std::uint64_t>(in); }
double read_f64(std::istream& in) { return read_le<double>(in); }

}  // namespace detail

namespace {
constexpr char kMagic[4] = {'T', 'R', 'O', 'M'};
}

void write_tensor(std::ostream& out, const DenseTensor& t) {
  out.write(kMagic, 4);
  detail::write_u32(out, kTensorFileVersion);
  require(t.order() <= 255, ErrorCode::InvalidDimension, "tensor order exceeds file format limit");
  const auto order = static_cast<unsigned char>(t.order());
  out.put(static_cast<char>(order));
  for (std::size_t d : t.dims()) detail::write_u64(out, d);
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
    if (!out) fail(ErrorCode::IoError, "write failed");
  } else {
    for (double x : t.values()) detail::write_f64(out, x);
  }
}

DenseTensor read_tensor(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0) fail(ErrorCode::FormatError, "bad tensor magic");
  const std::uint32_t version = detail::read_u32(in);
  if (version != kTensorFileVersion) fail(ErrorCode::FormatError, "unsupported tensor file version");
  const int order = in.get();
  if (order == std::char_traits<char>::eof() || order == 0) fail(ErrorCode::FormatError, "bad tensor order");
  Dims dims(static_cast<std::size_t>(order));
  std::size_t count = 1;
  for (auto& d : dims) {
    const std::uint64_t v = detail::read_u64(in);
    if (v == 0 || v > (std::uint64_t{1} << 40)) fail(ErrorCode::FormatError, "bad tensor dimension");
    d = static_cast<std::size_t>(v);
    count *= d;
    if (count > (std::size_t{1} << 34)) fail(ErrorCode::FormatError, "tensor too large");
  }
  std::vector<double> values(count);
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(count * sizeof(double)))
      fail(ErrorCode::FormatError, "truncated tensor values");
  } else {
    for (auto& x : values) x = detail::read_f64(in);
  }
  return DenseTensor(std::move(dims), std::move(values));
}

void save_tensor(const std::filesystem::path& path, const DenseTensor& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  write_tensor(out, t);
}

DenseTensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  return read_tensor(in);
}

}  // namespace trom
