// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace uego {

// Portable tensor container, little-endian throughout:
//   magic "UEGT" | u32 element type | u32 rank | u64 dims[rank] | row-major data
enum class ElementType : std::uint32_t { kF32 = 1, kF64 = 2, kU8 = 3, kI32 = 4 };

std::size_t element_size(ElementType type);

struct StoredTensor {
  ElementType type = ElementType::kF32;
  std::vector<std::uint64_t> dims;
  /// Raw element bytes, little-endian.
  std::vector<std::byte> bytes;

  std::uint64_t element_count() const;
  bool operator==(const StoredTensor&) const = default;

  static StoredTensor from_floats(std::vector<std::uint64_t> dims, std::span<const float> values);
  static StoredTensor from_doubles(std::vector<std::uint64_t> dims, std::span<const double> values);
  std::vector<float> to_floats() const;
  std::vector<double> to_doubles() const;
};

void write_tensor(std::ostream& out, const StoredTensor& tensor);
/// Throws DataError on bad magic, unknown type code or truncation.
StoredTensor read_tensor(std::istream& in);

void save_tensor(const StoredTensor& tensor, const std::filesystem::path& path);
StoredTensor load_tensor(const std::filesystem::path& path);

// Little-endian primitives shared with the checkpoint format.
void write_u32(std::ostream& out, std::uint32_t v);
void write_u64(std::ostream& out, std::uint64_t v);
std::uint32_t read_u32(std::istream& in);
std::uint64_t read_u64(std::istream& in);
void write_string(std::ostream& out, const std::string& s);
std::string read_string(std::istream& in);

}  // namespace uego
