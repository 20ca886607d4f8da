// SPDX-License-Identifier: Apache-2.0
#include "trom/container.hpp"

#include <cstring>
#include <fstream>

#include "trom/error.hpp"
#include "trom/tensor_io.hpp"

namespace trom {

namespace {
constexpr char kMagic[4] = {'T', 'R', 'M', 'C'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint64_t kMaxHeader = std::uint64_t{1} << 26;
}  // namespace

void SectionedFile::add(std::string name, DenseTensor t) {
  names.push_back(std::move(name));
  sections.push_back(std::move(t));
}

bool SectionedFile::has(std::string_view name) const {
  for (const auto& n : names)
    if (n == name) return true;
  return false;
}

const DenseTensor& SectionedFile::get(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return sections[i];
  fail(ErrorCode::FormatError, "missing section '" + std::string(name) + "'");
}

void write_container(const std::filesystem::path& path, const SectionedFile& file) {
  require(file.names.size() == file.sections.size(), ErrorCode::InvalidInput, "section names and data differ in count");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(kMagic, 4);
  detail::write_u32(out, kVersion);
  detail::write_u64(out, file.header_json.size());
  out.write(file.header_json.data(), static_cast<std::streamsize>(file.header_json.size()));
  detail::write_u32(out, static_cast<std::uint32_t>(file.sections.size()));
  for (std::size_t i = 0; i < file.sections.size(); ++i) {
    detail::write_u32(out, static_cast<std::uint32_t>(file.names[i].size()));
    out.write(file.names[i].data(), static_cast<std::streamsize>(file.names[i].size()));
    write_tensor(out, file.sections[i]);
  }
  if (!out) fail(ErrorCode::IoError, "write failed for " + path.string());
}

SectionedFile read_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0)
    fail(ErrorCode::FormatError, path.string() + " is not a sectioned container");
  if (detail::read_u32(in) != kVersion) fail(ErrorCode::FormatError, "unsupported container version");
  const std::uint64_t header_len = detail::read_u64(in);
  if (header_len > kMaxHeader) fail(ErrorCode::FormatError, "container header too large");
  SectionedFile file;
  file.header_json.resize(header_len);
  in.read(file.header_json.data(), static_cast<std::streamsize>(header_len));
  if (in.gcount() != static_cast<std::streamsize>(header_len)) fail(ErrorCode::FormatError, "truncated header");
  const std::uint32_t count = detail::read_u32(in);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t len = detail::read_u32(in);
    if (len > 4096) fail(ErrorCode::FormatError, "section name too long");
    std::string name(len, '\0');
    in.read(name.data(), len);
    if (in.gcount() != static_cast<std::streamsize>(len)) fail(ErrorCode::FormatError, "truncated section name");
    file.add(std::move(name), read_tensor(in));
  }
  return file;
}

}  // namespace trom
