// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/model/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uego/core/error.hpp"

namespace uego {
namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ArgumentError(std::string(what) + ": batch sizes differ (" + std::to_string(a) + " vs " +
                        std::to_string(b) + ")");
  }
  if (a == 0) throw ArgumentError(std::string(what) + ": empty batch");
}

PoseMatrix<double> as_matrix(const Pose3D& p) { return p.joints; }

}  // namespace

template <typename T>
T mse_loss(const nn::Tensor<T>& pred, const nn::Tensor<T>& target, nn::Tensor<T>* grad_pred,
           nn::Tensor<T>* grad_target) {
  if (!pred.same_shape(target)) {
    throw ArgumentError("mse: shape mismatch (" + std::to_string(pred.c) + "x" + std::to_string(pred.h) +
                        "x" + std::to_string(pred.w) + " vs " + std::to_string(target.c) + "x" +
                        std::to_string(target.h) + "x" + std::to_string(target.w) + ")");
  }
  if (pred.size() == 0) throw ArgumentError("mse: empty tensor");
  const T n = static_cast<T>(pred.size());
  const auto diff = (pred.vec() - target.vec()).eval();
  if (grad_pred) {
    *grad_pred = nn::Tensor<T>(pred.c, pred.h, pred.w);
    grad_pred->vec() = diff * (T(2) / n);
  }
  if (grad_target) {
    *grad_target = nn::Tensor<T>(pred.c, pred.h, pred.w);
    grad_target->vec() = diff * (T(-2) / n);
  }
  return diff.squaredNorm() / n;
}

template <typename T>
T loss_2d_sample(const nn::Tensor<T>& pred_left, const nn::Tensor<T>& pred_right,
                 const nn::Tensor<T>& truth_left, const nn::Tensor<T>& truth_right,
                 nn::Tensor<T>* grad_left, nn::Tensor<T>* grad_right) {
  T total = mse_loss(pred_left, truth_left, grad_left);
  if (pred_right.size() != 0 || truth_right.size() != 0) {
    total += mse_loss(pred_right, truth_right, grad_right);
  } else if (grad_right) {
    *grad_right = nn::Tensor<T>();
  }
  return total;
}

template <typename T>
T mpjpe_sample(const PoseMatrix<T>& truth, const PoseMatrix<T>& pred, PoseMatrix<T>* grad_pred) {
  const T inv_j = T(1) / static_cast<T>(kJointCount);
  if (grad_pred) grad_pred->setZero();
  T sum = 0;
  for (int j = 0; j < static_cast<int>(kJointCount); ++j) {
    const Eigen::Matrix<T, 1, 3> d = pred.row(j) - truth.row(j);
    const T dist = d.norm();
    sum += dist;
    if (grad_pred && dist > T(0)) grad_pred->row(j) = d * (inv_j / dist);
  }
  return sum * inv_j;
}

template <typename T>
T cos_sample(const PoseMatrix<T>& truth, const PoseMatrix<T>& pred, PoseMatrix<T>* grad_pred,
             const SkeletonTopology& topology) {
  const T eps = static_cast<T>(kCosineEpsilon);
  if (grad_pred) grad_pred->setZero();
  T sum = 0;
  for (const Bone& bone : topology.bones) {
    const Eigen::Matrix<T, 1, 3> a = truth.row(bone.child) - truth.row(bone.parent);
    const Eigen::Matrix<T, 1, 3> b = pred.row(bone.child) - pred.row(bone.parent);
    const T na = std::max(a.norm(), eps);
    const T nb_raw = b.norm();
    const T nb = std::max(nb_raw, eps);
    const T dot = a.dot(b);
    sum += dot / (na * nb);
    if (grad_pred) {
      Eigen::Matrix<T, 1, 3> dc = a / (na * nb);
      if (nb_raw > eps) dc -= b * (dot / (na * nb * nb * nb));
      grad_pred->row(bone.child) -= dc;
      grad_pred->row(bone.parent) += dc;
    }
  }
  return -sum;
}

template <typename T>
Loss3DTerms loss_3d_sample(const PoseMatrix<T>& truth, const PoseMatrix<T>& pred,
                           const nn::Tensor<T>& target_left, const nn::Tensor<T>& target_right,
                           const nn::Tensor<T>& recon_left, const nn::Tensor<T>& recon_right,
                           const LossWeights& weights, Loss3DGrads<T>* grads) {
  Loss3DTerms terms;
  PoseMatrix<T> g_mpjpe, g_cos;
  terms.mpjpe = static_cast<double>(mpjpe_sample(truth, pred, grads ? &g_mpjpe : nullptr));
  terms.cos = static_cast<double>(cos_sample(truth, pred, grads ? &g_cos : nullptr));
  const bool stereo = target_right.size() != 0 || recon_right.size() != 0;
  terms.hm_left = static_cast<double>(mse_loss(recon_left, target_left, grads ? &grads->recon_left : nullptr,
                                               grads ? &grads->target_left : nullptr));
  if (stereo) {
    terms.hm_right = static_cast<double>(mse_loss(recon_right, target_right,
                                                  grads ? &grads->recon_right : nullptr,
                                                  grads ? &grads->target_right : nullptr));
  }
  terms.total = weights.pose * (terms.mpjpe + weights.cos * terms.cos) +
                weights.hm * (terms.hm_left + terms.hm_right);
  if (grads) {
    const T wp = static_cast<T>(weights.pose);
    const T wc = static_cast<T>(weights.pose * weights.cos);
    const T wh = static_cast<T>(weights.hm);
    grads->pose = wp * g_mpjpe + wc * g_cos;
    grads->recon_left.vec() *= wh;
    grads->target_left.vec() *= wh;
    if (stereo) {
      grads->recon_right.vec() *= wh;
      grads->target_right.vec() *= wh;
    } else {
      grads->recon_right = nn::Tensor<T>();
      grads->target_right = nn::Tensor<T>();
    }
  }
  return terms;
}

double heatmap_mse(const HeatmapStack& a, const HeatmapStack& b) {
  if (a.size() != b.size()) {
    throw ArgumentError("heatmap mse: size mismatch (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
  }
  const auto x = a.data();
  const auto y = b.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = static_cast<double>(x[i]) - static_cast<double>(y[i]);
    sum += d * d;
  }
  return sum / static_cast<double>(x.size());
}

double loss_2d(std::span<const HeatmapStack> pred_left, std::span<const HeatmapStack> pred_right,
               std::span<const HeatmapStack> truth_left, std::span<const HeatmapStack> truth_right) {
  require_same_size(pred_left.size(), truth_left.size(), "loss_2d left");
  require_same_size(pred_right.size(), truth_right.size(), "loss_2d right");
  require_same_size(pred_left.size(), pred_right.size(), "loss_2d views");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred_left.size(); ++i) {
    sum += heatmap_mse(pred_left[i], truth_left[i]) + heatmap_mse(pred_right[i], truth_right[i]);
  }
  return sum / static_cast<double>(pred_left.size());
}

double mpjpe_loss(std::span<const Pose3D> truth, std::span<const Pose3D> pred) {
  require_same_size(truth.size(), pred.size(), "mpjpe_loss");
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    sum += mpjpe_sample<double>(as_matrix(truth[i]), as_matrix(pred[i]), nullptr);
  }
  return sum / static_cast<double>(truth.size());
}

double cos_loss(std::span<const Pose3D> truth, std::span<const Pose3D> pred,
                const SkeletonTopology& topology) {
  require_same_size(truth.size(), pred.size(), "cos_loss");
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    sum += cos_sample<double>(as_matrix(truth[i]), as_matrix(pred[i]), nullptr, topology);
  }
  return sum / static_cast<double>(truth.size());
}

double loss_3d(std::span<const Pose3D> truth, std::span<const Pose3D> pred,
               std::span<const HeatmapStack> target_left, std::span<const HeatmapStack> target_right,
               std::span<const HeatmapStack> recon_left, std::span<const HeatmapStack> recon_right,
               const LossWeights& weights) {
  require_same_size(truth.size(), pred.size(), "loss_3d poses");
  require_same_size(target_left.size(), recon_left.size(), "loss_3d left heatmaps");
  require_same_size(target_right.size(), recon_right.size(), "loss_3d right heatmaps");
  require_same_size(truth.size(), target_left.size(), "loss_3d poses/heatmaps");
  double hm = 0.0;
  for (std::size_t i = 0; i < target_left.size(); ++i) {
    hm += heatmap_mse(target_left[i], recon_left[i]) + heatmap_mse(target_right[i], recon_right[i]);
  }
  hm /= static_cast<double>(target_left.size());
  return weights.pose * (mpjpe_loss(truth, pred) + weights.cos * cos_loss(truth, pred)) + weights.hm * hm;
}

template float mse_loss(const nn::Tensor<float>&, const nn::Tensor<float>&, nn::Tensor<float>*,
                        nn::Tensor<float>*);
template double mse_loss(const nn::Tensor<double>&, const nn::Tensor<double>&, nn::Tensor<double>*,
                         nn::Tensor<double>*);
template float loss_2d_sample(const nn::Tensor<float>&, const nn::Tensor<float>&, const nn::Tensor<float>&,
                              const nn::Tensor<float>&, nn::Tensor<float>*, nn::Tensor<float>*);
template double loss_2d_sample(const nn::Tensor<double>&, const nn::Tensor<double>&,
                               const nn::Tensor<double>&, const nn::Tensor<double>&, nn::Tensor<double>*,
                               nn::Tensor<double>*);
template float mpjpe_sample(const PoseMatrix<float>&, const PoseMatrix<float>&, PoseMatrix<float>*);
template double mpjpe_sample(const PoseMatrix<double>&, const PoseMatrix<double>&, PoseMatrix<double>*);
template float cos_sample(const PoseMatrix<float>&, const PoseMatrix<float>&, PoseMatrix<float>*,
                          const SkeletonTopology&);
template double cos_sample(const PoseMatrix<double>&, const PoseMatrix<double>&, PoseMatrix<double>*,
                           const SkeletonTopology&);
template Loss3DTerms loss_3d_sample(const PoseMatrix<float>&, const PoseMatrix<float>&,
                                    const nn::Tensor<float>&, const nn::Tensor<float>&,
                                    const nn::Tensor<float>&, const nn::Tensor<float>&, const LossWeights&,
                                    Loss3DGrads<float>*);
template Loss3DTerms loss_3d_sample(const PoseMatrix<double>&, const PoseMatrix<double>&,
                                    const nn::Tensor<double>&, const nn::Tensor<double>&,
                                    const nn::Tensor<double>&, const nn::Tensor<double>&, const LossWeights&,
                                    Loss3DGrads<double>*);

}  // namespace uego
