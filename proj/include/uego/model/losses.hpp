// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include <Eigen/Core>

#include "uego/core/heatmap.hpp"
#include "uego/core/pose.hpp"
#include "uego/core/skeleton.hpp"
#include "uego/nn/tensor.hpp"

namespace uego {

inline constexpr double kCosineEpsilon = 1e-8;

struct LossWeights {
  double pose = 0.1;
  double cos = 0.01;
  double hm = 0.001;
};

template <typename T>
using PoseMatrix = Eigen::Matrix<T, static_cast<int>(kJointCount), 3, Eigen::RowMajor>;

// Per-sample forms. A batch value is the mean of the per-sample values, so
// summing per-sample gradients and scaling by 1/B gives the batch gradient.

/// Mean over all elements of (pred - target)^2. Either gradient pointer may be null.
template <typename T>
T mse_loss(const nn::Tensor<T>& pred, const nn::Tensor<T>& target, nn::Tensor<T>* grad_pred,
           nn::Tensor<T>* grad_target = nullptr);

/// mse(left) + mse(right); a view with an empty tensor contributes nothing.
template <typename T>
T loss_2d_sample(const nn::Tensor<T>& pred_left, const nn::Tensor<T>& pred_right,
                 const nn::Tensor<T>& truth_left, const nn::Tensor<T>& truth_right,
                 nn::Tensor<T>* grad_left, nn::Tensor<T>* grad_right);

/// (1/J) sum_j |truth_j - pred_j|. The subgradient at a zero distance is zero.
template <typename T>
T mpjpe_sample(const PoseMatrix<T>& truth, const PoseMatrix<T>& pred, PoseMatrix<T>* grad_pred);

/// -sum_l cos(truth bone l, pred bone l), denominators floored at kCosineEpsilon.
template <typename T>
T cos_sample(const PoseMatrix<T>& truth, const PoseMatrix<T>& pred, PoseMatrix<T>* grad_pred,
             const SkeletonTopology& topology = build_topology());

template <typename T>
struct Loss3DGrads {
  PoseMatrix<T> pose;
  nn::Tensor<T> recon_left, recon_right;
  /// Gradients with respect to the reconstruction targets (the 2D predictions).
  nn::Tensor<T> target_left, target_right;
};

struct Loss3DTerms {
  double mpjpe = 0.0;
  double cos = 0.0;
  double hm_left = 0.0;
  double hm_right = 0.0;
  double total = 0.0;
};

/// weights.pose * (mpjpe + weights.cos * cos) + weights.hm * (mse_left + mse_right).
/// An empty right target marks a single-view model.
template <typename T>
Loss3DTerms loss_3d_sample(const PoseMatrix<T>& truth, const PoseMatrix<T>& pred,
                           const nn::Tensor<T>& target_left, const nn::Tensor<T>& target_right,
                           const nn::Tensor<T>& recon_left, const nn::Tensor<T>& recon_right,
                           const LossWeights& weights, Loss3DGrads<T>* grads);

// Batch forms over core types, evaluated in double precision.

double loss_2d(std::span<const HeatmapStack> pred_left, std::span<const HeatmapStack> pred_right,
               std::span<const HeatmapStack> truth_left, std::span<const HeatmapStack> truth_right);
double mpjpe_loss(std::span<const Pose3D> truth, std::span<const Pose3D> pred);
double cos_loss(std::span<const Pose3D> truth, std::span<const Pose3D> pred,
                const SkeletonTopology& topology = build_topology());
double heatmap_mse(const HeatmapStack& a, const HeatmapStack& b);
double loss_3d(std::span<const Pose3D> truth, std::span<const Pose3D> pred,
               std::span<const HeatmapStack> target_left, std::span<const HeatmapStack> target_right,
               std::span<const HeatmapStack> recon_left, std::span<const HeatmapStack> recon_right,
               const LossWeights& weights = {});

}  // namespace uego
