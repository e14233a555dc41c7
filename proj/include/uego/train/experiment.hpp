// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uego/metrics/metrics.hpp"
#include "uego/train/dataset.hpp"
#include "uego/train/train_config.hpp"
#include "uego/train/trainer.hpp"

namespace uego {

struct DatasetSplits {
  FrameDataset train;
  FrameDataset val;
  FrameDataset test;

  static DatasetSplits open(const std::filesystem::path& root, const TrainConfig& config);
};

struct ExperimentResult {
  std::vector<RunReport> runs;
  /// Absent when the dataset has no test frames.
  std::optional<MultiRunReport> summary;
};

/// Trains and tests config.runs models. With `out_dir` set, run k writes
/// run_k/{report.json, timing.json, checkpoints}. When the test split has
/// frames, the directory also gets summary.json and table.txt.
ExperimentResult run_experiment(DatasetSplits& data, const TrainConfig& config,
                                const std::optional<std::filesystem::path>& out_dir, const ProgressFn& progress = {});

struct AblationCell {
  int backbone = 18;
  bool weight_sharing = true;
  Strategy strategy = Strategy::kSeparate;
  Variant variant = Variant::kStereoShared;

  std::string label() const;
  TrainConfig apply(TrainConfig base) const;
};

struct AblationGrid {
  std::vector<int> backbones{18};
  std::vector<bool> weight_sharing{true};
  std::vector<Strategy> strategies{Strategy::kSeparate};
  std::vector<Variant> variants{Variant::kStereoShared};

  /// Cartesian product; weight sharing only varies for the stereo-shared variant.
  std::vector<AblationCell> cells() const;
};

AblationGrid ablation_grid_from_json(const nlohmann::json& j);
nlohmann::json to_json_value(const AblationGrid& grid);

struct CellResult {
  AblationCell cell;
  std::optional<ExperimentResult> result;
  std::string error;
  std::size_t params_2d = 0;
  std::size_t encoder_params = 0;
};

/// Each cell failure is recorded and the suite moves on.
std::vector<CellResult> ablation_suite(DatasetSplits& data, const AblationGrid& grid, const TrainConfig& base,
                                       const std::optional<std::filesystem::path>& out_dir,
                                       const ProgressFn& progress = {});

std::string format_ablation_table(const std::vector<CellResult>& results);
nlohmann::json to_json_value(const std::vector<CellResult>& results);

}  // namespace uego
