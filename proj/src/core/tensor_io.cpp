// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/core/tensor_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "uego/core/error.hpp"

namespace uego {
namespace {

constexpr std::array<char, 4> kMagic = {'U', 'E', 'G', 'T'};
constexpr std::uint32_t kMaxRank = 8;

template <typename T>
std::vector<std::byte> to_le_bytes(std::span<const T> values) {
  static_assert(std::endian::native == std::endian::little ||
                std::endian::native == std::endian::big);
  std::vector<std::byte> out(values.size() * sizeof(T));
  std::memcpy(out.data(), values.data(), out.size());
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::reverse(out.begin() + i * sizeof(T), out.begin() + (i + 1) * sizeof(T));
    }
  }
  return out;
}

template <typename T>
std::vector<T> from_le_bytes(const std::vector<std::byte>& bytes) {
  std::vector<T> out(bytes.size() / sizeof(T));
  std::vector<std::byte> copy = bytes;
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::reverse(copy.begin() + i * sizeof(T), copy.begin() + (i + 1) * sizeof(T));
    }
  }
  std::memcpy(out.data(), copy.data(), out.size() * sizeof(T));
  return out;
}

void read_exact(std::istream& in, void* dst, std::size_t n) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw DataError("truncated tensor stream");
}

}  // namespace

std::size_t element_size(ElementType type) {
  switch (type) {
    case ElementType::kF32: return 4;
    case ElementType::kF64: return 8;
    case ElementType::kU8: return 1;
    case ElementType::kI32: return 4;
  }
  throw DataError("unknown element type code " + std::to_string(static_cast<std::uint32_t>(type)));
}

std::uint64_t StoredTensor::element_count() const {
  std::uint64_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

StoredTensor StoredTensor::from_floats(std::vector<std::uint64_t> dims, std::span<const float> values) {
  StoredTensor t{ElementType::kF32, std::move(dims), {}};
  if (t.element_count() != values.size()) throw ArgumentError("tensor dims do not match value count");
  t.bytes = to_le_bytes(values);
  return t;
}

StoredTensor StoredTensor::from_doubles(std::vector<std::uint64_t> dims, std::span<const double> values) {
  StoredTensor t{ElementType::kF64, std::move(dims), {}};
  if (t.element_count() != values.size()) throw ArgumentError("tensor dims do not match value count");
  t.bytes = to_le_bytes(values);
  return t;
}

std::vector<float> StoredTensor::to_floats() const {
  if (type == ElementType::kF32) return from_le_bytes<float>(bytes);
  if (type == ElementType::kF64) {
    const auto d = from_le_bytes<double>(bytes);
    return std::vector<float>(d.begin(), d.end());
  }
  throw DataError("tensor is not floating point");
}

std::vector<double> StoredTensor::to_doubles() const {
  if (type == ElementType::kF64) return from_le_bytes<double>(bytes);
  if (type == ElementType::kF32) {
    const auto f = from_le_bytes<float>(bytes);
    return std::vector<double>(f.begin(), f.end());
  }
  throw DataError("tensor is not floating point");
}

void write_u32(std::ostream& out, std::uint32_t v) {
  std::array<unsigned char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b.data()), 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
  std::array<unsigned char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b.data()), 8);
}

std::uint32_t read_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  read_exact(in, b.data(), 4);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t read_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  read_exact(in, b.data(), 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

void write_string(std::ostream& out, const std::string& s) {
  write_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
  const std::uint32_t n = read_u32(in);
  if (n > (1u << 24)) throw DataError("string length out of range");
  std::string s(n, '\0');
  read_exact(in, s.data(), n);
  return s;
}

void write_tensor(std::ostream& out, const StoredTensor& t) {
  if (t.bytes.size() != t.element_count() * element_size(t.type)) {
    throw ArgumentError("tensor byte count does not match dims");
  }
  out.write(kMagic.data(), kMagic.size());
  write_u32(out, static_cast<std::uint32_t>(t.type));
  write_u32(out, static_cast<std::uint32_t>(t.dims.size()));
  for (auto d : t.dims) write_u64(out, d);
  out.write(reinterpret_cast<const char*>(t.bytes.data()), static_cast<std::streamsize>(t.bytes.size()));
  if (!out) throw DataError("tensor write failed");
}

StoredTensor read_tensor(std::istream& in) {
  std::array<char, 4> magic{};
  read_exact(in, magic.data(), magic.size());
  if (magic != kMagic) throw DataError("bad tensor magic");
  StoredTensor t;
  t.type = static_cast<ElementType>(read_u32(in));
  const std::size_t esize = element_size(t.type);
  const std::uint32_t rank = read_u32(in);
  if (rank > kMaxRank) throw DataError("tensor rank out of range");
  t.dims.resize(rank);
  for (auto& d : t.dims) d = read_u64(in);
  const std::uint64_t count = t.element_count();
  if (count > (1ULL << 34)) throw DataError("tensor too large");
  t.bytes.resize(count * esize);
  read_exact(in, t.bytes.data(), t.bytes.size());
  return t;
}

void save_tensor(const StoredTensor& tensor, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_tensor(out, tensor);
}

StoredTensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_tensor(in);
}

}  // namespace uego
