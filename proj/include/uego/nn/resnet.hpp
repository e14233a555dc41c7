// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "uego/nn/layers.hpp"

namespace uego::nn {

/// Residual encoder layout. Depth picks the block type and per-stage counts;
/// `stages` keeps only the first few stages and `blocks` (when non-empty)
/// replaces the counts.
struct ResNetConfig {
  int depth = 18;
  int base_width = 16;
  int stages = 4;
  std::vector<int> blocks;
  int in_channels = 3;
  /// Starts the last convolution of every residual branch at zero, so each
  /// block begins as its shortcut (there is no normalization layer).
  bool zero_init_residual = true;

  bool bottleneck() const { return depth >= 50; }
  /// Throws ArgumentError for unsupported depths or stage counts.
  std::vector<int> stage_blocks() const;
  int stage_channels(int stage) const;
};

template <typename T>
class BasicBlock final : public Module<T> {
 public:
  BasicBlock(const std::string& name, int in, int out, int stride, bool zero_init,
             std::mt19937_64& rng);
  Tensor<T> forward(const Tensor<T>& x) override;
  Tensor<T> backward(const Tensor<T>& grad_out) override;
  void collect(ParameterList<T>& out) const override;
  void clear() override;

 private:
  Conv2d<T> conv1_;
  Activation<T> act1_;
  Conv2d<T> conv2_;
  std::unique_ptr<Conv2d<T>> shortcut_;
  Activation<T> act_out_;
};

template <typename T>
class Bottleneck final : public Module<T> {
 public:
  Bottleneck(const std::string& name, int in, int mid, int out, int stride, bool zero_init,
             std::mt19937_64& rng);
  Tensor<T> forward(const Tensor<T>& x) override;
  Tensor<T> backward(const Tensor<T>& grad_out) override;
  void collect(ParameterList<T>& out) const override;
  void clear() override;

 private:
  Conv2d<T> conv1_;
  Activation<T> act1_;
  Conv2d<T> conv2_;
  Activation<T> act2_;
  Conv2d<T> conv3_;
  std::unique_ptr<Conv2d<T>> shortcut_;
  Activation<T> act_out_;
};

/// Stem (7x7 stride-2 convolution, ReLU, 3x3 stride-2 max pool) followed by
/// residual stages; stage i > 0 halves the resolution. Returns every stage's
/// output, shallowest first.
template <typename T>
class ResNetEncoder {
 public:
  ResNetEncoder(const std::string& name, const ResNetConfig& config, std::mt19937_64& rng);

  std::vector<Tensor<T>> forward(const Tensor<T>& image);
  /// Gradients for each stage output (empty tensors count as zero). Input
  /// gradients are not produced.
  void backward(const std::vector<Tensor<T>>& grads);
  void collect(ParameterList<T>& out) const;
  void clear();

  const ResNetConfig& config() const { return config_; }
  int stage_count() const { return static_cast<int>(stages_.size()); }
  int channels(int stage) const { return config_.stage_channels(stage); }

 private:
  ResNetConfig config_;
  std::unique_ptr<Conv2d<T>> stem_;
  Activation<T> stem_act_;
  MaxPool2d<T> pool_{3, 2, 1};
  std::vector<Sequential<T>> stages_;
};

}  // namespace uego::nn
