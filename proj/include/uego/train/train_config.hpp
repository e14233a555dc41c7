// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "uego/model/pose2d_net.hpp"
#include "uego/model/pose3d_net.hpp"
#include "uego/nn/adam.hpp"

namespace uego {

enum class Strategy { kSeparate, kEnd2End };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view name);

struct TrainConfig {
  Strategy strategy = Strategy::kSeparate;
  int batch_size = 16;
  /// Epochs per phase; separate training runs this many for each module.
  int epochs = 10;
  double base_lr = 1e-3;
  nn::AdamConfig adam;
  int runs = 3;
  /// Base seed; run k uses seeds[k] when given, otherwise a stream derived from this.
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> seeds;
  Pose2DConfig pose2d;
  Pose3DConfig pose3d;
  /// Separate strategy only: feed ground-truth heatmaps to the 3D module.
  bool gt_heatmaps_for_3d = false;
  /// End-to-end strategy: total = loss_2d + loss3d_weight * loss_3d.
  double loss3d_weight = 1.0;
  double heatmap_sigma = 2.0;
  /// Frame caps per split (0 keeps everything).
  int max_train_frames = 0;
  int max_val_frames = 0;
  int max_test_frames = 0;
  /// Upper bound for in-memory caches of decoded samples and predicted heatmaps.
  int cache_mb = 1024;

  void validate() const;
  std::vector<std::uint64_t> run_seeds() const;
  /// Keeps the 3D module's input shape and view count in step with the 2D module.
  void sync_models();
};

nlohmann::json to_json_value(const TrainConfig& config);
/// Accepts either a bare training object or an experiment file with a "train" key.
TrainConfig train_config_from_json(const nlohmann::json& j);
TrainConfig load_train_config(const std::filesystem::path& path);
std::string config_hash(const TrainConfig& config);

/// Learning rate at a fraction of the schedule: base_lr up to 0.5, then linear to 0 at 1.
double lr_at(double fraction, const TrainConfig& config);
/// Epoch-granular schedule: epoch e trains at lr_at((e + 0.5) / epochs).
double epoch_lr(int epoch, const TrainConfig& config);

}  // namespace uego
