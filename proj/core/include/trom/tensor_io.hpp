// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "trom/tensor.hpp"

namespace trom {

inline constexpr std::uint32_t kTensorFileVersion = 1;

/// Binary layout: "TROM", u32 version, u8 order, u64 dims, f64 values, all
/// little-endian, values in storage order.
void write_tensor(std::ostream& out, const DenseTensor& t);
[[nodiscard]] DenseTensor read_tensor(std::istream& in);

void save_tensor(const std::filesystem::path& path, const DenseTensor& t);
[[nodiscard]] DenseTensor load_tensor(const std::filesystem::path& path);

namespace detail {
void write_u32(std::ostream& out, std::uint32_t v);
void write_u64(std::ostream& out, std::uint64_t v);
void write_f64(std::ostream& out, double v);
[[nodiscard]] std::uint32_t read_u32(std::istream& in);
[[nodiscard]] std::uint64_t read_u64(std::istream& in);
[[nodiscard]] double read_f64(std::istream& in);
}  // namespace detail

}  // namespace trom
