// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace uego {

enum class Split { kTrain, kVal, kTest };

std::string_view to_string(Split split);
Split parse_split(std::string_view name);
inline constexpr std::array<Split, 3> kAllSplits = {Split::kTrain, Split::kVal, Split::kTest};

struct ClipEntry {
  std::string motion_id;
  std::string category;
  int character_id = 0;
  int frame_count = 0;
  /// Metadata files relative to the dataset root, in frame order.
  std::vector<std::string> frames;

  bool operator==(const ClipEntry&) const = default;
};

struct DatasetManifest {
  Split split = Split::kTrain;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::uint64_t topology_checksum = 0;
  std::vector<ClipEntry> clips;

  int frame_count() const;
  bool operator==(const DatasetManifest&) const = default;
};

nlohmann::json to_json_value(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const nlohmann::json& j);

/// `manifest.<split>` under `root`.
std::filesystem::path manifest_path(const std::filesystem::path& root, Split split);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
/// With `verify_files`, every referenced metadata file and its two images must
/// exist under `root`; otherwise DataError names the first missing one.
DatasetManifest load_manifest(const std::filesystem::path& path,
                              const std::filesystem::path& root, bool verify_files = true);

/// Motion-level split. Counts are floor(ratio * n) with the remainder handed
/// out by largest fractional part (ties go to the earlier split); ids are
/// shuffled before assignment.
struct SplitAssignment {
  std::vector<int> train;
  std::vector<int> val;
  std::vector<int> test;

  const std::vector<int>& of(Split s) const;
};

SplitAssignment split_motions(int motion_count, const std::array<double, 3>& ratios,
                              std::mt19937_64& rng);

}  // namespace uego
