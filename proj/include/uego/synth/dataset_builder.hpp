// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uego/camera/fisheye.hpp"
#include "uego/core/manifest.hpp"
#include "uego/spawn/spawner.hpp"

namespace uego {

struct SynthConfig {
  RigConfig rig;
  SpawnConfig spawn;
  std::vector<SpawnRegion> scene = default_scene();
  int character_pool = 17;
  double min_duration_s = 1.6;
  double max_duration_s = 2.4;
  std::array<double, 3> split_ratios{0.8, 0.1, 0.1};
  double amplitude_scale = 1.0;
  /// Renders at 1024 px instead of the network's 256 px input size.
  bool native_resolution = false;
  /// Draws the other members of a spawn group into each wearer's views.
  bool render_crowd = true;

  /// Throws ArgumentError on inconsistent values.
  void validate() const;
  /// Rig actually used for rendering, after the resolution flag.
  RigConfig effective_rig() const;
};

nlohmann::json to_json_value(const SynthConfig& config);
SynthConfig synth_config_from_json(const nlohmann::json& j);
SynthConfig load_synth_config(const std::filesystem::path& path);
std::string config_hash(const SynthConfig& config);

struct DatasetSummary {
  std::array<DatasetManifest, 3> manifests;
  int motions = 0;
  int frames = 0;
  std::map<std::string, int> motions_per_category;
  std::vector<std::string> warnings;

  const DatasetManifest& manifest(Split s) const { return manifests[static_cast<int>(s)]; }
};

/// Generates `n_motions` clips with categories assigned round-robin from
/// `categories` (all thirty when empty), renders every frame, and writes the
/// records, one manifest per split and a dataset.lock under `out_dir`.
/// Splitting happens per motion. Throws ArgumentError for bad arguments and
/// DataError when the output cannot be written.
DatasetSummary build_dataset(int n_motions, const std::vector<std::string>& categories,
                             const SynthConfig& config, const std::filesystem::path& out_dir,
                             std::uint64_t seed);

struct DatasetLock {
  std::uint64_t seed = 0;
  std::string config_hash;
  int motions = 0;
  std::vector<std::string> categories;
};

DatasetLock read_dataset_lock(const std::filesystem::path& root);

}  // namespace uego
