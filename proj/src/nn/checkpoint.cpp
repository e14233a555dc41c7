// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "uego/core/error.hpp"
#include "uego/core/hashing.hpp"
#include "uego/core/skeleton.hpp"

namespace uego::nn {
namespace {

constexpr char kMagic[4] = {'U', 'E', 'G', 'C'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  out.write(kMagic, 4);
  write_u32(out, kVersion);
  write_string(out, c.kind);
  write_string(out, c.config_hash);
  write_u64(out, c.topology_checksum);
  write_u32(out, static_cast<std::uint32_t>(c.tensors.size()));
  for (const auto& [name, tensor] : c.tensors) {
    write_string(out, name);
    write_tensor(out, tensor);
  }
  if (!out) throw DataError("checkpoint write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("checkpoint not found: " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw DataError("not a checkpoint: " + path.string());
  if (read_u32(in) != kVersion) throw DataError("unsupported checkpoint version: " + path.string());
  Checkpoint c;
  c.kind = read_string(in);
  c.config_hash = read_string(in);
  c.topology_checksum = read_u64(in);
  const std::uint32_t n = read_u32(in);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::string name = read_string(in);
    c.tensors.emplace(std::move(name), read_tensor(in));
  }
  return c;
}

template <typename T>
void export_parameters(const ParameterList<T>& params, Checkpoint& c, const std::string& prefix) {
  for (const auto& p : params.items()) {
    std::vector<std::uint64_t> dims(p->shape.begin(), p->shape.end());
    std::span<const T> values(p->value.data(), static_cast<std::size_t>(p->value.size()));
    if constexpr (std::is_same_v<T, float>) {
      c.tensors[prefix + p->name] = StoredTensor::from_floats(std::move(dims), values);
    } else {
      c.tensors[prefix + p->name] = StoredTensor::from_doubles(std::move(dims), values);
    }
  }
}

template <typename T>
void import_parameters(ParameterList<T>& params, const Checkpoint& c, const std::string& prefix) {
  for (const auto& p : params.items()) {
    const auto it = c.tensors.find(prefix + p->name);
    if (it == c.tensors.end()) throw DataError("checkpoint lacks tensor " + prefix + p->name);
    const std::vector<std::uint64_t> dims(p->shape.begin(), p->shape.end());
    if (it->second.dims != dims) throw DataError("shape mismatch for tensor " + prefix + p->name);
    if constexpr (std::is_same_v<T, float>) {
      const auto v = it->second.to_floats();
      p->value = Eigen::Map<const Vector<T>>(v.data(), static_cast<Eigen::Index>(v.size()));
    } else {
      const auto v = it->second.to_doubles();
      p->value = Eigen::Map<const Vector<T>>(v.data(), static_cast<Eigen::Index>(v.size()));
    }
  }
}

void verify_checkpoint(const Checkpoint& c, const std::string& kind, const std::string& config_hash) {
  if (c.kind != kind) throw DataError("checkpoint holds '" + c.kind + "', expected '" + kind + "'");
  if (c.config_hash != config_hash) {
    throw DataError("checkpoint was trained with config " + c.config_hash +
                    " but the current model config hashes to " + config_hash);
  }
  if (c.topology_checksum != build_topology().checksum()) {
    throw DataError("checkpoint uses a different joint ordering");
  }
}

template <typename T>
std::uint64_t parameter_checksum(const ParameterList<T>& params) {
  std::uint64_t h = kFnvOffset;
  for (const auto& p : params.items()) {
    h = fnv1a64(p->name, h);
    h = fnv1a64(std::as_bytes(std::span<const T>(p->value.data(), static_cast<std::size_t>(p->value.size()))), h);
  }
  return h;
}

template void export_parameters(const ParameterList<float>&, Checkpoint&, const std::string&);
template void export_parameters(const ParameterList<double>&, Checkpoint&, const std::string&);
template void import_parameters(ParameterList<float>&, const Checkpoint&, const std::string&);
template void import_parameters(ParameterList<double>&, const Checkpoint&, const std::string&);
template std::uint64_t parameter_checksum(const ParameterList<float>&);
template std::uint64_t parameter_checksum(const ParameterList<double>&);

}  // namespace uego::nn
