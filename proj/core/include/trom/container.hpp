// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "trom/decomp.hpp"
#include "trom/tensor.hpp"

namespace trom {

/// Sectioned binary file: "TRMC", u32 version, u64 header length, a JSON
/// header, u32 section count, then per section a u32 name length, the name
/// and one tensor blob in the plain tensor file format.
struct SectionedFile {
  std::string header_json;
  std::vector<std::string> names;
  std::vector<DenseTensor> sections;

  void add(std::string name, DenseTensor t);
  [[nodiscard]] bool has(std::string_view name) const;
  [[nodiscard]] const DenseTensor& get(std::string_view name) const;
};

void write_container(const std::filesystem::path& path, const SectionedFile& file);
[[nodiscard]] SectionedFile read_container(const std::filesystem::path& path);

using AnyDecomposition = std::variant<CpDecomposition, TuckerDecomposition, TtDecomposition>;

[[nodiscard]] std::string_view format_name(const AnyDecomposition& d);

/// Header records format, ranks and the achieved (or bounded) error.
void save_decomposition(const std::filesystem::path& path, const AnyDecomposition& d);
[[nodiscard]] AnyDecomposition load_decomposition(const std::filesystem::path& path);

}  // namespace trom
