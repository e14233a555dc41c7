// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uego/metrics/metrics.hpp"
#include "uego/model/losses.hpp"
#include "uego/model/pose2d_net.hpp"
#include "uego/model/pose3d_net.hpp"
#include "uego/nn/adam.hpp"
#include "uego/train/dataset.hpp"
#include "uego/train/train_config.hpp"

namespace uego {

struct PoseModel {
  std::unique_ptr<Pose2DNet<float>> net2d;
  std::unique_ptr<Pose3DNet<float>> net3d;

  static PoseModel create(const TrainConfig& config, std::uint64_t seed);
  nn::ParameterList<float> parameters() const;
};

// Per-sample forward/backward. Gradients accumulate into the parameters;
// the returned values are the sample's losses.

template <typename T>
double accumulate_2d(Pose2DNet<T>& net, const nn::Tensor<T>& left, const nn::Tensor<T>& right,
                     const nn::Tensor<T>& truth_left, const nn::Tensor<T>& truth_right);

template <typename T>
Loss3DTerms accumulate_3d(Pose3DNet<T>& net, const nn::Tensor<T>& heatmaps_left, const nn::Tensor<T>& heatmaps_right,
                          const PoseMatrix<T>& truth);

struct JointLoss {
  double loss_2d = 0.0;
  Loss3DTerms loss_3d;
  double total = 0.0;
};

/// loss_2d + weight_3d * loss_3d with gradients flowing from the 3D module
/// (pose branch, reconstruction branch and reconstruction target) into the 2D module.
template <typename T>
JointLoss accumulate_end2end(Pose2DNet<T>& net2d, Pose3DNet<T>& net3d, const nn::Tensor<T>& left,
                             const nn::Tensor<T>& right, const nn::Tensor<T>& truth_left,
                             const nn::Tensor<T>& truth_right, const PoseMatrix<T>& truth, double weight_3d);

struct EpochLog {
  int epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;
  double train_loss_2d = 0.0;
  double train_loss_3d = 0.0;
  /// NaN when there is no validation split.
  double val_loss_2d = 0.0;
  double val_loss_3d = 0.0;
  std::string checksum_2d;
};

struct RunReport {
  std::string strategy;
  std::uint64_t seed = 0;
  std::string config_hash;
  /// Separate: 2D phase then 3D phase. End-to-end: the joint phase in `phase1`.
  std::vector<EpochLog> phase1;
  std::vector<EpochLog> phase2;
  bool frozen_2d_verified = false;
  std::string checksum_2d;
  std::string checksum_3d;
  std::size_t params_2d = 0;
  std::size_t params_3d = 0;
  std::size_t encoder_params = 0;
  std::optional<EvalReport> test;
  /// Kept out of the JSON so that reports of identical runs are byte-identical.
  double wall_seconds = 0.0;
};

nlohmann::json to_json_value(const RunReport& report);

using ProgressFn = std::function<void(const std::string&)>;

/// Phase 1 trains the 2D module with loss_2d; phase 2 freezes it and trains the
/// 3D module on its predicted (or, if configured, ground-truth) heatmaps.
RunReport train_separate(PoseModel& model, const FrameDataset& train, const FrameDataset* val,
                         const TrainConfig& config, std::uint64_t seed, const ProgressFn& progress = {});
RunReport train_end2end(PoseModel& model, const FrameDataset& train, const FrameDataset* val,
                        const TrainConfig& config, std::uint64_t seed, const ProgressFn& progress = {});
RunReport train_run(PoseModel& model, const FrameDataset& train, const FrameDataset* val, const TrainConfig& config,
                    std::uint64_t seed, const ProgressFn& progress = {});

struct EvalOutput {
  EvalReport report;
  /// Ground-truth-visible joints and how many decoded within two heatmap cells.
  int visible_joints = 0;
  int within_two_cells = 0;
  std::vector<Pose3D> predictions;
  double keypoint_accuracy() const {
    return visible_joints ? static_cast<double>(within_two_cells) / visible_joints : 0.0;
  }
};

EvalOutput evaluate_model(PoseModel& model, const FrameDataset& data, const TrainConfig& config);

std::string pose2d_hash(const Pose2DConfig& config);
std::string pose3d_hash(const Pose3DConfig& config);
/// Separate runs write pose2d.ckpt and pose3d.ckpt; end-to-end runs write model.ckpt.
std::vector<std::filesystem::path> save_model(const PoseModel& model, const TrainConfig& config,
                                              const std::filesystem::path& dir);
/// Loads whichever layout is present and refuses checkpoints whose config hash differs.
PoseModel load_model(const TrainConfig& config, const std::filesystem::path& dir);

}  // namespace uego
