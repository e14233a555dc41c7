// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <utility>

#include <nlohmann/json.hpp>

#include "uego/core/pose.hpp"
#include "uego/model/losses.hpp"
#include "uego/nn/layers.hpp"

namespace uego {

struct Pose3DConfig {
  int heatmap_size = 64;
  /// 2 for stereo input, 1 for the monocular baseline.
  int views = 2;
  int base_channels = 16;
  int encoder_stages = 4;
  int embedding_dim = 512;
  int pose_hidden = 256;
  /// The pose head regresses joints in metres; outputs are multiplied by this.
  double output_scale_cm = 100.0;
  double leaky_slope = 0.2;
  LossWeights weights;

  void validate() const;
  int input_channels() const { return views * static_cast<int>(kHeatmapJointCount); }
  int bottleneck_size() const { return heatmap_size >> encoder_stages; }
  int bottleneck_channels() const { return base_channels << (encoder_stages - 1); }
};

nlohmann::json to_json_value(const Pose3DConfig& config);
Pose3DConfig pose3d_config_from_json(const nlohmann::json& j);

template <typename T>
struct Pose3DOutput {
  PoseMatrix<T> pose;
  nn::Tensor<T> recon_left;
  /// Empty for a single-view model.
  nn::Tensor<T> recon_right;
};

/// Multi-branch autoencoder: strided-conv encoder over the stacked heatmaps, a
/// fully connected pose branch and a deconvolution branch that reconstructs the input.
template <typename T>
class Pose3DNet {
 public:
  Pose3DNet(const Pose3DConfig& config, std::uint64_t seed);

  /// `right` is ignored (and may be empty) when views == 1.
  Pose3DOutput<T> forward(const nn::Tensor<T>& left, const nn::Tensor<T>& right);
  /// Returns the gradients with respect to the left and right input heatmaps.
  std::pair<nn::Tensor<T>, nn::Tensor<T>> backward(const PoseMatrix<T>& grad_pose,
                                                  const nn::Tensor<T>& grad_recon_left,
                                                  const nn::Tensor<T>& grad_recon_right);

  nn::ParameterList<T> parameters() const;
  const Pose3DConfig& config() const { return config_; }
  void clear();

 private:
  Pose3DConfig config_;
  nn::Sequential<T> encoder_;
  nn::Sequential<T> pose_branch_;
  nn::Sequential<T> heatmap_branch_;
};

Pose3D to_pose(const PoseMatrix<float>& m, PoseFrame frame = PoseFrame::kDevice);
Pose3D to_pose(const PoseMatrix<double>& m, PoseFrame frame = PoseFrame::kDevice);
template <typename T>
PoseMatrix<T> from_pose(const Pose3D& pose) {
  return pose.joints.cast<T>();
}

}  // namespace uego
