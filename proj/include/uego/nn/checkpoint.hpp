// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "uego/core/tensor_io.hpp"
#include "uego/nn/tensor.hpp"

namespace uego::nn {

/// Named tensors plus the hash of the configuration that produced them.
struct Checkpoint {
  std::string kind;
  std::string config_hash;
  std::uint64_t topology_checksum = 0;
  std::map<std::string, StoredTensor> tensors;
};

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

template <typename T>
void export_parameters(const ParameterList<T>& params, Checkpoint& checkpoint,
                       const std::string& prefix = "");

/// Copies stored values into `params`. Throws DataError when a tensor is
/// missing or has the wrong shape.
template <typename T>
void import_parameters(ParameterList<T>& params, const Checkpoint& checkpoint,
                       const std::string& prefix = "");

/// Throws DataError unless the checkpoint was written for `config_hash` and
/// the current joint ordering.
void verify_checkpoint(const Checkpoint& checkpoint, const std::string& kind,
                       const std::string& config_hash);

/// FNV-1a over parameter names and value bytes.
template <typename T>
std::uint64_t parameter_checksum(const ParameterList<T>& params);

}  // namespace uego::nn
